import pytest
from hypothesis import given, strategies as st

from curvecx.surface import (HypothesisError, NoIdealTriangulation, SimplexDimRange, SmallComplexKind,
                             SurfaceSig, complex_dimension, eq1_holds, euler_char,
                             ideal_triangulation_counts, maximal_simplex_range,
                             onesided_count_for_dimension, pants_count, projective_plane,
                             small_complex_table, sphere, surface_info)

surfaces = st.builds(
    lambda o, g, n: SurfaceSig(o, g if o else g + 1, n),
    st.booleans(), st.integers(0, 6), st.integers(0, 8))


def test_parse_and_print():
    assert SurfaceSig.parse("N3,1") == SurfaceSig(False, 3, 1)
    assert SurfaceSig.parse("S{0,4}") == sphere(4)
    assert str(projective_plane(5)) == "N1,5"
    with pytest.raises(ValueError):
        SurfaceSig.parse("T1,1")
    with pytest.raises(ValueError):
        SurfaceSig(False, 0, 3)


@given(surfaces)
def test_json_round_trip(sig):
    assert SurfaceSig.from_json(sig.to_json()) == sig
    assert SurfaceSig.parse(str(sig)) == sig


def test_euler_characteristic():
    assert euler_char(SurfaceSig.parse("N3,1")) == -2
    assert euler_char(sphere(3)) == -1
    assert euler_char(SurfaceSig.parse("S1,0")) == 0
    assert euler_char(projective_plane(0)) == 1


@pytest.mark.parametrize("name,kind", [
    ("S0,3", SmallComplexKind.EMPTY), ("S0,2", SmallComplexKind.EMPTY),
    ("S0,4", SmallComplexKind.INFINITE_DISCRETE), ("S1,1", SmallComplexKind.INFINITE_DISCRETE),
    ("N1,0", SmallComplexKind.SINGLE_VERTEX), ("N1,1", SmallComplexKind.SINGLE_VERTEX),
    ("N1,2", SmallComplexKind.TWO_VERTICES), ("N2,1", SmallComplexKind.GENERIC),
    ("S0,5", SmallComplexKind.GENERIC),
])
def test_small_complex_table(name, kind):
    assert small_complex_table(SurfaceSig.parse(name)) is kind


@pytest.mark.parametrize("name,lo,hi", [
    ("N3,1", 2, 3), ("N1,4", 2, 2), ("N1,2", 0, 0), ("N5,0", 4, 6), ("N4,2", 4, 6), ("S2,1", 3, 3),
])
def test_maximal_simplex_range(name, lo, hi):
    rng = maximal_simplex_range(SurfaceSig.parse(name))
    assert (rng.lo, rng.hi) == (lo, hi)
    assert complex_dimension(SurfaceSig.parse(name)) == hi


def test_range_outside_hypotheses():
    with pytest.raises(HypothesisError):
        maximal_simplex_range(SurfaceSig.parse("N1,1"))
    with pytest.raises(HypothesisError):
        maximal_simplex_range(SurfaceSig.parse("S0,3"))
    assert maximal_simplex_range(SurfaceSig.parse("N2,1")).extrapolated
    assert not maximal_simplex_range(SurfaceSig.parse("N3,1")).extrapolated
    assert SimplexDimRange(2, 2).degenerate and 2 in SimplexDimRange(2, 3)


def test_onesided_counts_match_eq1():
    sig = SurfaceSig.parse("N3,1")
    assert onesided_count_for_dimension(sig, 2) == 1
    assert onesided_count_for_dimension(sig, 3) == 3
    assert eq1_holds(sig, 2, 1) and eq1_holds(sig, 3, 3)
    assert not eq1_holds(sig, 3, 1)
    with pytest.raises(HypothesisError):
        onesided_count_for_dimension(sig, 4)


@given(st.integers(3, 9), st.integers(0, 5))
def test_range_ends_satisfy_eq1(g, n):
    sig = SurfaceSig(False, g, n)
    rng = maximal_simplex_range(sig)
    for d in range(rng.lo, rng.hi + 1):
        assert eq1_holds(sig, d, onesided_count_for_dimension(sig, d))


def test_pants_and_triangulation_counts():
    sig = SurfaceSig.parse("N3,1")
    assert pants_count(sig) == 2
    assert ideal_triangulation_counts(sig) == (4, 6)
    with pytest.raises(NoIdealTriangulation):
        ideal_triangulation_counts(SurfaceSig.parse("N3,0"))
    with pytest.raises(HypothesisError):
        pants_count(sphere(2))


def test_surface_info_keys():
    info = surface_info(SurfaceSig.parse("N3,1"))
    assert info["euler_char"] == -2 and info["maximal_simplex_range"] == [2, 3]
    assert info["pants_count"] == 2
    info = surface_info(sphere(2))
    assert info["maximal_simplex_range"] is None and info["pants_count"] is None
