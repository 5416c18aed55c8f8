"""Closed-form arithmetic on punctured surfaces.

Everything here is indexed by a :class:`SurfaceSig`.  Boundary components
are counted as punctures throughout.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass


class HypothesisError(ValueError):
    """Raised when a formula is requested outside the range where it holds."""


class NoIdealTriangulation(HypothesisError):
    pass


@dataclass(frozen=True, order=True)
class SurfaceSig:
    orientable: bool
    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise ValueError("genus and punctures must be nonnegative")
        if not self.orientable and self.genus < 1:
            raise ValueError("a nonorientable surface has genus >= 1")

    @property
    def euler_char(self) -> int:
        return euler_char(self)

    def __str__(self):
        return f"{'S' if self.orientable else 'N'}{self.genus},{self.punctures}"

    @classmethod
    def parse(cls, text: str) -> "SurfaceSig":
        """Parse the shorthand ``N3,1`` / ``S0,4`` (braces allowed: ``N{3,1}``)."""
        m = re.fullmatch(r"\s*([NS])\{?\s*(\d+)\s*,\s*(\d+)\s*\}?\s*", text)
        if m is None:
            raise ValueError(f"cannot parse surface {text!r}; expected e.g. N3,1 or S0,4")
        return cls(m.group(1) == "S", int(m.group(2)), int(m.group(3)))

    def to_json(self) -> dict:
        return {"orientable": self.orientable, "genus": self.genus, "punctures": self.punctures}

    @classmethod
    def from_json(cls, data: dict) -> "SurfaceSig":
        return cls(bool(data["orientable"]), int(data["genus"]), int(data["punctures"]))


def sphere(n: int) -> SurfaceSig:
    return SurfaceSig(True, 0, n)


def projective_plane(n: int) -> SurfaceSig:
    return SurfaceSig(False, 1, n)


@dataclass(frozen=True)
class SimplexDimRange:
    """Dimensions attained by maximal simplices of the curve complex."""
    lo: int
    hi: int
    extrapolated: bool = False

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, dim: int) -> bool:
        return self.lo <= dim <= self.hi


class SmallComplexKind(enum.Enum):
    EMPTY = "Empty"
    INFINITE_DISCRETE = "InfiniteDiscrete"
    SINGLE_VERTEX = "SingleVertex"
    TWO_VERTICES = "TwoVertices"
    GENERIC = "Generic"


def euler_char(sig: SurfaceSig) -> int:
    if sig.orientable:
        return 2 - 2 * sig.genus - sig.punctures
    return 2 - sig.genus - sig.punctures


def small_complex_table(sig: SurfaceSig) -> SmallComplexKind:
    g, n = sig.genus, sig.punctures
    if sig.orientable:
        if g == 0 and n <= 3:
            return SmallComplexKind.EMPTY
        if (g, n) in ((0, 4), (1, 0), (1, 1)):
            return SmallComplexKind.INFINITE_DISCRETE
        return SmallComplexKind.GENERIC
    if g == 1 and n <= 1:
        return SmallComplexKind.SINGLE_VERTEX
    if g == 1 and n == 2:
        return SmallComplexKind.TWO_VERTICES
    return SmallComplexKind.GENERIC


def complex_dimension(sig: SurfaceSig) -> int | None:
    """Dimension of the curve complex, or ``None`` where no closed form applies.

    ``None`` is returned for the exceptional small surfaces; consult
    :func:`small_complex_table` for those.
    """
    g, n = sig.genus, sig.punctures
    if sig.orientable:
        if 2 * g + n >= 4:
            return 3 * g + n - 4
        return None
    if g == 1:
        return n - 2 if n >= 2 else None
    if euler_char(sig) >= 0:
        return None
    r, odd = divmod(g - 1, 2)
    if odd == 0:
        return 4 * r + n - 2
    return 4 * r + n


def maximal_simplex_range(sig: SurfaceSig) -> SimplexDimRange:
    g, n = sig.genus, sig.punctures
    if sig.orientable:
        if 2 * g + n < 4:
            raise HypothesisError(f"{sig}: needs 2g+n >= 4")
        d = 3 * g + n - 4
        return SimplexDimRange(d, d)
    if g == 1:
        if n < 2:
            raise HypothesisError(f"{sig}: genus-1 formula needs n >= 2")
        return SimplexDimRange(n - 2, n - 2)
    if euler_char(sig) >= 0:
        raise HypothesisError(f"{sig}: needs negative Euler characteristic")
    if g % 2 == 1:
        r = (g - 1) // 2
        return SimplexDimRange(3 * r + n - 2, 4 * r + n - 2)
    r = g // 2
    # the range is only established for genus >= 3
    return SimplexDimRange(3 * r + n - 4, 4 * r + n - 4, extrapolated=(g == 2))


def onesided_count_for_dimension(sig: SurfaceSig, dim: int) -> int:
    """Number of one-sided curves in a maximal simplex of dimension ``dim``."""
    if sig.orientable:
        raise HypothesisError(f"{sig}: orientable surfaces have no one-sided curves")
    rng = maximal_simplex_range(sig)
    if dim not in rng:
        raise HypothesisError(f"{sig}: dimension {dim} outside [{rng.lo}, {rng.hi}]")
    if sig.genus % 2 == 1:
        return 2 * (dim - rng.lo) + 1
    return 2 * (dim - rng.lo)


def pants_count(sig: SurfaceSig) -> int:
    chi = euler_char(sig)
    if chi >= 0:
        raise HypothesisError(f"{sig}: pants decompositions need negative Euler characteristic")
    return -chi


def eq1_holds(sig: SurfaceSig, dim: int, onesided: int) -> bool:
    """Boundary count of a pants decomposition: 3k = n + m + 2(l + 1 - m)."""
    m = onesided
    return 3 * pants_count(sig) == sig.punctures + m + 2 * (dim + 1 - m)


def ideal_triangulation_counts(sig: SurfaceSig) -> tuple[int, int]:
    chi = euler_char(sig)
    if sig.punctures < 1 or chi >= 0:
        raise NoIdealTriangulation(f"{sig}: no ideal triangulation (needs n >= 1 and chi < 0)")
    return -2 * chi, -3 * chi


def surface_info(sig: SurfaceSig) -> dict:
    """Everything the closed forms say about ``sig``, as a JSON-ready dict."""
    info: dict = {"surface": sig.to_json(), "name": str(sig), "euler_char": euler_char(sig),
                  "small_complex": small_complex_table(sig).value,
                  "complex_dimension": complex_dimension(sig)}
    try:
        rng = maximal_simplex_range(sig)
        info["maximal_simplex_range"] = [rng.lo, rng.hi]
        info["range_extrapolated"] = rng.extrapolated
    except HypothesisError as exc:
        info["maximal_simplex_range"] = None
        info["range_error"] = str(exc)
    try:
        info["pants_count"] = pants_count(sig)
    except HypothesisError:
        info["pants_count"] = None
    try:
        t, e = ideal_triangulation_counts(sig)
        info["ideal_triangulation"] = {"triangles": t, "edges": e}
    except HypothesisError:
        info["ideal_triangulation"] = None
    return info
