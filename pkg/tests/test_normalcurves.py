import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from curvecx import normalcurves as nc
from curvecx import triangulation as tr

from conftest import curves, reference


def _sum(a, b):
    return tuple(x + y for x, y in zip(a, b))


def test_corner_counts():
    assert nc.corner_counts((2, 2, 2)) == (1, 1, 1)
    assert nc.corner_counts((1, 1, 0)) is not None
    assert nc.corner_counts((1, 0, 0)) is None     # odd perimeter
    assert nc.corner_counts((4, 1, 1)) is None     # triangle inequality


def test_admissibility_length_mismatch():
    with pytest.raises(ValueError):
        nc.is_admissible(reference("N1,3"), (1, 1))


def test_peripheral_curves_are_trivial():
    T = reference("N1,3")
    for p in range(T.num_punctures):
        w = nc.peripheral_curve(T, p)
        assert nc.is_connected(T, w)
        assert nc.classify(T, w).verdict == nc.BOUNDS_PUNCTURED_DISC


def test_small_surfaces():
    assert curves("S0,3", 6) == ()
    two = curves("N1,2", 6)
    assert len(two) == 2 and all(c.one_sided for c in two)
    kinds = [c.label() for c in curves("N1,3", 4)]
    assert kinds.count("OneSided") == 16 and kinds.count("2-separating") == 22


def test_cut_rejects_multicurves():
    T = reference("N1,3")
    a, b = [c.weights for c in curves("N1,3", 4)][:2]
    if nc.disjoint(T, a, b):
        with pytest.raises(nc.NotConnected):
            nc.cut_along(T, _sum(a, b))


def test_disjoint_rejects_equal_classes():
    T = reference("N1,3")
    w = curves("N1,3", 4)[0].weights
    with pytest.raises(nc.SameClass):
        nc.disjoint(T, w, w)


def test_walk_agrees_with_full_trace():
    T = reference("N1,4")
    vs = [c.weights for c in curves("N1,4", 3)]
    rng = random.Random(0)
    for _ in range(300):
        a, b = rng.sample(vs, 2)
        by_trace = sorted(nc.trace(T, _sum(a, b))) == sorted([a, b])
        assert nc.disjoint(T, a, b) == by_trace


n13 = st.sampled_from([c.weights for c in curves("N1,3", 4)])


@settings(max_examples=60, deadline=None)
@given(n13, n13)
def test_sums_of_admissible_vectors_are_admissible(a, b):
    T = reference("N1,3")
    s = _sum(a, b)
    assert nc.is_admissible(T, s)
    comps = nc.trace(T, s)
    assert tuple(map(sum, zip(*comps))) == s


@settings(max_examples=60, deadline=None)
@given(n13, n13)
def test_disjoint_is_symmetric(a, b):
    if a != b:
        T = reference("N1,3")
        assert nc.disjoint(T, a, b) == nc.disjoint(T, b, a)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([c for c in curves("N1,4", 3)]))
def test_euler_characteristic_is_additive(c):
    chi = reference("N1,4").surface.euler_char
    assert sum(p.euler_char for p in c.pieces) == chi
    assert sum(p.boundary_count for p in c.pieces) == (1 if c.one_sided else 2)


@settings(max_examples=60, deadline=None)
@given(n13, st.integers(0, 5))
def test_transport_round_trip(w, e):
    T = reference("N1,3")
    if e not in nc.transportable_edges(T):
        return
    w2 = nc.transport_flip(T, w, e)
    T2 = tr.flip(T, e)
    assert nc.is_admissible(T2, w2)
    assert nc.transport_flip(T2, w2, e) == w
    assert nc.classify(T2, w2).curve.shape() == nc.classify(T, w).curve.shape()


def test_transport_rejects_unflippable():
    from test_triangulation import self_folded_example
    T, e = self_folded_example()
    assert e not in nc.transportable_edges(T)
    with pytest.raises((nc.Untransportable, tr.UnflippableEdge)):
        nc.transport_flip(T, (0,) * T.num_edges, e)


def test_side_of_locates_disjoint_curves():
    T = reference("N1,5")
    vs = curves("N1,5", 2)
    sep = next(c for c in vs if c.separating)
    for c in vs:
        if c.weights != sep.weights and nc.disjoint(T, sep.weights, c.weights):
            assert nc.side_of(T, sep.weights, c.weights) in (0, 1)


def test_arc_neighbourhoods_are_two_separating():
    T = reference("N1,5")
    for e in range(T.num_edges):
        p, q = T.edge_endpoints(e)
        if p == q:
            continue
        comps = nc.arc_neighborhood_curves(T, e)
        assert len(comps) == 1
        assert nc.classify(T, comps[0]).curve.is_k_separating(2)


def test_curve_file_json():
    T = reference("N1,3")
    rec = nc.CurveFile(nc.triangulation_id(T), curves("N1,3", 4)[0].weights)
    assert nc.CurveFile.from_json(json.loads(json.dumps(rec.to_json()))) == rec
    assert len(rec.triangulation) == 12
