"""Normal multicurves on ideal triangulations.

A multicurve is stored as its edge weights: how many times it crosses each
edge of a fixed triangulation.  Inside a triangle with side weights
``x0, x1, x2`` the curve consists of corner arcs; corner ``v`` carries
``(x_v + x_{v-1} - x_{v+1}) / 2`` of them.

Crossing points on a side are numbered from the side's starting corner.
On edge ``i`` the numbering of its first slot is the edge's own frame; the
second slot reads the same points in reverse when the gluing is
antiparallel.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .triangulation import Triangulation, UnflippableEdge, _find, flip

Weights = tuple[int, ...]

ONE_SIDED = "OneSided"
TWO_SIDED_NONSEPARATING = "TwoSidedNonseparating"
SEPARATING = "Separating"

NONTRIVIAL = "Nontrivial"
BOUNDS_DISC = "BoundsDisc"
BOUNDS_PUNCTURED_DISC = "BoundsOncePuncturedDisc"
BOUNDS_MOBIUS = "BoundsMobiusBand"


class NotConnected(ValueError):
    pass


class SameClass(ValueError):
    pass


class Untransportable(ValueError):
    pass


def triangulation_id(T: Triangulation) -> str:
    blob = json.dumps(T.to_json(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


class _Frame:
    """Per-triangulation lookup tables shared by every curve on it."""

    def __init__(self, T: Triangulation):
        T.check()
        self.T = T
        self.t = T.t
        self.e = T.num_edges
        es = T.edge_of_slot
        self.side_edge = [[es[3 * i + s] for s in range(3)] for i in range(T.t)]
        # True when the slot reads its edge's points backwards
        flipped = [False] * (3 * T.t)
        for a, b, r in T.edges:
            flipped[b] = r
        self.flipped = flipped
        self.corner_puncture = T.corner_puncture


_FRAMES: dict[Triangulation, _Frame] = {}


def _frame(T: Triangulation) -> _Frame:
    fr = _FRAMES.get(T)
    if fr is None:
        if len(_FRAMES) > 256:
            _FRAMES.clear()
        fr = _FRAMES[T] = _Frame(T)
    return fr


def side_weights(T: Triangulation, w: Sequence[int], tri: int) -> tuple[int, int, int]:
    es = T.edge_of_slot
    return w[es[3 * tri]], w[es[3 * tri + 1]], w[es[3 * tri + 2]]


def corner_counts(x: Sequence[int]) -> tuple[int, int, int] | None:
    """Corner arc counts for side weights ``x``; ``None`` if not normal."""
    x0, x1, x2 = x
    if (x0 + x1 + x2) % 2:
        return None
    c0 = (x0 + x2 - x1) // 2
    c1 = (x1 + x0 - x2) // 2
    c2 = (x2 + x1 - x0) // 2
    if c0 < 0 or c1 < 0 or c2 < 0:
        return None
    return c0, c1, c2


def is_admissible(T: Triangulation, w: Sequence[int]) -> bool:
    if len(w) != T.num_edges:
        raise ValueError(f"expected {T.num_edges} weights, got {len(w)}")
    if any(x < 0 for x in w):
        return False
    return all(corner_counts(side_weights(T, w, i)) is not None for i in range(T.t))


def _corners_or_raise(T, w):
    if not is_admissible(T, w):
        raise ValueError(f"weights {tuple(w)} are not admissible")
    return [corner_counts(side_weights(T, w, i)) for i in range(T.t)]


def _arcs(fr: _Frame, w, corners):
    """Yield every corner arc as (tri, corner, depth, point on side v, point on side v-1)."""
    offsets = [0] * fr.e
    total = 0
    for i in range(fr.e):
        offsets[i] = total
        total += w[i]
    flipped = fr.flipped

    def point(slot, edge, pos):
        return offsets[edge] + (w[edge] - 1 - pos if flipped[slot] else pos)

    out = []
    for tri in range(fr.t):
        c = corners[tri]
        sides = fr.side_edge[tri]
        for v in range(3):
            cv = c[v]
            if not cv:
                continue
            prev = (v + 2) % 3
            ev, ep = sides[v], sides[prev]
            xp = w[ep]
            for d in range(cv):
                out.append((tri, v, d, point(3 * tri + v, ev, d), point(3 * tri + prev, ep, xp - 1 - d)))
    return out, offsets, total


def trace(T: Triangulation, w: Sequence[int]) -> list[Weights]:
    """Connected components of the normal multicurve with weights ``w``.

    Components come back sorted; their weights sum to ``w``.
    """
    corners = _corners_or_raise(T, w)
    fr = _frame(T)
    arcs, offsets, total = _arcs(fr, w, corners)
    parent = list(range(total))
    for _, _, _, p, q in arcs:
        rp, rq = _find(parent, p), _find(parent, q)
        if rp != rq:
            parent[rp] = rq
    comps: dict[int, list[int]] = {}
    for i in range(fr.e):
        for j in range(offsets[i], offsets[i] + w[i]):
            vec = comps.setdefault(_find(parent, j), [0] * fr.e)
            vec[i] += 1
    return sorted(tuple(v) for v in comps.values())


def _walk(T: Triangulation, w, corners, e0: int, limit: int | None = None):
    """Weights of the component through point 0 of edge ``e0``.

    Gives up (returns ``None``) once more than ``limit`` points are visited.
    """
    fr = _frame(T)
    flipped, side_edge, edges = fr.flipped, fr.side_edge, T.edges
    counts = [0] * fr.e
    start_slot = edges[e0][0]
    edge, pos, slot = e0, 0, start_slot
    visited = 0
    while True:
        counts[edge] += 1
        visited += 1
        if limit is not None and visited > limit:
            return None
        tri, s = divmod(slot, 3)
        x = w[edge]
        q = x - 1 - pos if flipped[slot] else pos
        if q < corners[tri][s]:
            ns = (s + 2) % 3
            nedge = side_edge[tri][ns]
            nq = w[nedge] - 1 - q
        else:
            ns = (s + 1) % 3
            nedge = side_edge[tri][ns]
            nq = x - 1 - q
        nslot = 3 * tri + ns
        pos = w[nedge] - 1 - nq if flipped[nslot] else nq
        a, b, _ = edges[nedge]
        slot = b if nslot == a else a
        edge = nedge
        if edge == e0 and pos == 0 and slot == start_slot:
            return tuple(counts)


def is_connected(T: Triangulation, w: Sequence[int]) -> bool:
    """Whether ``w`` is a single curve (``w`` must be admissible and nonzero)."""
    w = tuple(w)
    corners = [corner_counts(side_weights(T, w, i)) for i in range(T.t)]
    e0 = next(i for i, x in enumerate(w) if x)
    return _walk(T, w, corners, e0) == w


def component_count(T: Triangulation, w: Sequence[int]) -> int:
    corners = _corners_or_raise(T, w)
    arcs, _, total = _arcs(_frame(T), w, corners)
    parent = list(range(total))
    n = total
    for _, _, _, p, q in arcs:
        rp, rq = _find(parent, p), _find(parent, q)
        if rp != rq:
            parent[rp] = rq
            n -= 1
    return n


# -- cutting -----------------------------------------------------------------

@dataclass(frozen=True)
class CutPiece:
    orientable: bool
    genus: int
    punctures: tuple[int, ...]
    boundary_count: int

    @property
    def euler_char(self) -> int:
        n = len(self.punctures) + self.boundary_count
        if self.orientable:
            return 2 - 2 * self.genus - n
        return 2 - self.genus - n

    def is_disc_with(self, k: int) -> bool:
        return (self.orientable and self.genus == 0 and self.boundary_count == 1
                and len(self.punctures) == k)

    def summary(self) -> str:
        kind = "S" if self.orientable else "N"
        return f"{kind}{self.genus},{len(self.punctures)}+{self.boundary_count}b"

    def shape(self) -> tuple:
        return (self.orientable, self.genus, len(self.punctures), self.boundary_count)

    def to_json(self) -> dict:
        return {"orientable": self.orientable, "genus": self.genus,
                "punctures": list(self.punctures), "boundary_count": self.boundary_count}


def cut_along(T: Triangulation, w: Sequence[int]) -> list[CutPiece]:
    """Pieces of the surface cut open along the connected curve ``w``.

    The cell structure is the one the curve induces on the triangulation:
    regions of triangles, edge segments between crossing points, and the two
    sides of each corner arc and crossing point.  Punctures are ideal and
    contribute no cells.
    """
    comps = trace(T, w)
    if len(comps) != 1 or comps[0] != tuple(w):
        raise NotConnected(f"weights {tuple(w)} do not describe a single curve")
    return _cut(T, tuple(w))


def _cut(T: Triangulation, w: Weights, detail: bool = False):
    """Cut along the multicurve ``w``.

    With ``detail`` also return, for every new boundary circle, the index of
    its piece and one crossing point (``offsets``-numbered) on it.
    """
    fr = _frame(T)
    corners = [corner_counts(side_weights(T, w, i)) for i in range(T.t)]
    # region ids: per triangle, central region then corner regions R(v, k)
    base = []
    nreg = 0
    for tri in range(T.t):
        base.append(nreg)
        nreg += 1 + sum(corners[tri])

    def region(tri, v, k):
        c = corners[tri]
        return base[tri] + 1 + sum(c[:v]) + k

    def central(tri):
        return base[tri]

    def seg_region(tri, s, k):
        c = corners[tri]
        x = c[s] + c[(s + 1) % 3]
        if k < c[s]:
            return region(tri, s, k)
        if k == c[s]:
            return central(tri)
        return region(tri, (s + 1) % 3, x - k)

    # union regions across edge segments, tracking orientation parity
    parent = list(range(nreg))
    parity = [0] * nreg  # parity relative to parent

    def find(x):
        path = []
        while parent[x] != x:
            path.append(x)
            x = parent[x]
        root = x
        acc = 0
        for y in reversed(path):
            acc ^= parity[y]
            parity[y] = acc
            parent[y] = root
        return root

    twisted = set()
    segments = []  # (edge, k, region_a)
    for i, (a, b, r) in enumerate(T.edges):
        ta, sa = divmod(a, 3)
        tb, sb = divmod(b, 3)
        x = w[i]
        rel = 0 if r else 1  # antiparallel gluing keeps the triangle orientations
        for k in range(x + 1):
            ra = seg_region(ta, sa, k)
            rb = seg_region(tb, sb, x - k if r else k)
            segments.append(ra)
            fa, fb = find(ra), find(rb)
            pa, pb = parity[ra] if ra != fa else 0, parity[rb] if rb != fb else 0
            if fa != fb:
                parent[fa] = fb
                parity[fa] = pa ^ pb ^ rel
            elif pa ^ pb != rel:
                twisted.add(fa)
    roots = sorted({find(r) for r in range(nreg)})
    twisted = {find(r) for r in twisted}
    piece_of = {root: i for i, root in enumerate(roots)}
    npieces = len(roots)

    faces = [0] * npieces
    for r in range(nreg):
        faces[piece_of[find(r)]] += 1
    edges_ = [0] * npieces
    for ra in segments:
        edges_[piece_of[find(ra)]] += 1

    # point sides: 2 * point + (0: towards segment j, 1: towards segment j + 1)
    arcs, offsets, total = _arcs(fr, w, corners)
    ps_piece = [0] * (2 * total)
    for i, (a, b, r) in enumerate(T.edges):
        ta, sa = divmod(a, 3)
        for j in range(w[i]):
            p = offsets[i] + j
            ps_piece[2 * p] = piece_of[find(seg_region(ta, sa, j))]
            ps_piece[2 * p + 1] = piece_of[find(seg_region(ta, sa, j + 1))]
    verts = [0] * npieces
    for x in ps_piece:
        verts[x] += 1

    flipped = fr.flipped

    def pside(slot, edge, pos, seg):
        # convert a slot-frame (position, adjacent segment) into a point-side id
        if flipped[slot]:
            pos, seg = w[edge] - 1 - pos, w[edge] - seg
        return 2 * (offsets[edge] + pos) + (seg - pos)

    bparent = list(range(2 * total))
    for tri, v, d, _, _ in arcs:
        prev = (v + 2) % 3
        ev, ep = fr.side_edge[tri][v], fr.side_edge[tri][prev]
        p = w[ep] - 1 - d
        sv, sp = 3 * tri + v, 3 * tri + prev
        near = (pside(sv, ev, d, d), pside(sp, ep, p, p + 1))
        far = (pside(sv, ev, d, d + 1), pside(sp, ep, p, p))
        for x, y in (near, far):
            rx, ry = _find(bparent, x), _find(bparent, y)
            if rx != ry:
                bparent[rx] = ry
            edges_[ps_piece[x]] += 1
    boundaries = [0] * npieces
    circles = []
    for root in sorted({_find(bparent, x) for x in range(2 * total)}):
        boundaries[ps_piece[root]] += 1
        circles.append((ps_piece[root], root // 2))

    punct: list[set] = [set() for _ in range(npieces)]
    cp = fr.corner_puncture
    for tri in range(T.t):
        c = corners[tri]
        for v in range(3):
            reg = region(tri, v, 0) if c[v] else central(tri)
            punct[piece_of[find(reg)]].add(cp[3 * tri + v])

    pieces = []
    for i, root in enumerate(roots):
        chi = verts[i] - edges_[i] + faces[i]
        orientable = root not in twisted
        rest = 2 - chi - boundaries[i] - len(punct[i])
        genus = rest // 2 if orientable else rest
        pieces.append(CutPiece(orientable, genus, tuple(sorted(punct[i])), boundaries[i]))
    order = sorted(range(npieces), key=lambda i: (pieces[i].punctures, pieces[i].shape()))
    pieces = [pieces[i] for i in order]
    if detail:
        rank = {old: new for new, old in enumerate(order)}
        return pieces, [(rank[pc], pt) for pc, pt in circles]
    return pieces


def side_of(T: Triangulation, v: Sequence[int], u: Sequence[int]) -> int:
    """Index, in ``cut_along(T, v)``, of the piece holding a curve ``u`` disjoint from ``v``."""
    v, u = tuple(v), tuple(u)
    pieces_v = cut_along(T, v)
    s = tuple(a + b for a, b in zip(v, u))
    corners = [corner_counts(side_weights(T, s, i)) for i in range(T.t)]
    arcs, offsets, total = _arcs(_frame(T), s, corners)
    parent = list(range(total))
    for _, _, _, p, q in arcs:
        rp, rq = _find(parent, p), _find(parent, q)
        if rp != rq:
            parent[rp] = rq
    comp_of_root: dict[int, list[int]] = {}
    for i in range(T.num_edges):
        for j in range(offsets[i], offsets[i] + s[i]):
            comp_of_root.setdefault(_find(parent, j), [0] * T.num_edges)[i] += 1
    if sorted(tuple(c) for c in comp_of_root.values()) != sorted((v, u)):
        raise ValueError("curves are not disjoint")
    pieces, circles = _cut(T, s, detail=True)
    # merge the pieces of N minus (v and u) across the circles coming from u
    merged = list(range(len(pieces)))
    by_curve: dict[int, list[int]] = {}
    for pc, pt in circles:
        if tuple(comp_of_root[_find(parent, pt)]) == u:
            by_curve.setdefault(0, []).append(pc)
    u_pieces = by_curve.get(0, [])
    for pc in u_pieces:
        merged[pc] = u_pieces[0]
    home = u_pieces[0]
    punct = set()
    for i, pc in enumerate(pieces):
        if merged[i] == home:
            punct.update(pc.punctures)
    matches = [i for i, pc in enumerate(pieces_v) if set(pc.punctures) == punct]
    if len(matches) != 1:
        raise ValueError("cannot locate the curve in a complementary piece")
    return matches[0]


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class CurveClass:
    weights: Weights
    kind: str
    pieces: tuple[CutPiece, ...]
    disc_sizes: tuple[int, ...] = ()

    @property
    def k_separating(self) -> int | None:
        return min(self.disc_sizes) if self.disc_sizes else None

    def is_k_separating(self, k: int) -> bool:
        return k in self.disc_sizes

    @property
    def one_sided(self) -> bool:
        return self.kind == ONE_SIDED

    @property
    def separating(self) -> bool:
        return self.kind == SEPARATING

    def label(self) -> str:
        if self.kind == SEPARATING and self.disc_sizes:
            return f"{self.k_separating}-separating"
        return self.kind

    def shape(self) -> tuple:
        """Kind and piece topology, independent of puncture labels."""
        return (self.kind, self.disc_sizes, tuple(sorted(p.shape() for p in self.pieces)))

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "kind": self.kind,
                "k": self.k_separating, "disc_sizes": list(self.disc_sizes),
                "pieces": [p.to_json() for p in self.pieces]}


@dataclass(frozen=True)
class Classification:
    verdict: str
    pieces: tuple[CutPiece, ...]
    curve: CurveClass | None = None

    @property
    def kind(self) -> str:
        return self.curve.kind if self.curve else self.verdict


def classify_pieces(w: Weights, pieces: Sequence[CutPiece]) -> Classification:
    pieces = tuple(pieces)
    if len(pieces) == 1:
        kind = ONE_SIDED if pieces[0].boundary_count == 1 else TWO_SIDED_NONSEPARATING
        return Classification(NONTRIVIAL, pieces, CurveClass(tuple(w), kind, pieces))
    for pc in pieces:
        if pc.boundary_count != 1:
            continue
        if pc.is_disc_with(0):
            return Classification(BOUNDS_DISC, pieces)
        if pc.is_disc_with(1):
            return Classification(BOUNDS_PUNCTURED_DISC, pieces)
        if not pc.orientable and pc.genus == 1 and not pc.punctures:
            return Classification(BOUNDS_MOBIUS, pieces)
    discs = tuple(sorted({len(pc.punctures) for pc in pieces if pc.orientable and pc.genus == 0}))
    return Classification(NONTRIVIAL, pieces, CurveClass(tuple(w), SEPARATING, pieces, discs))


def classify(T: Triangulation, w: Sequence[int]) -> Classification:
    return classify_pieces(tuple(w), cut_along(T, w))


def disjoint(T: Triangulation, w1: Sequence[int], w2: Sequence[int]) -> bool:
    """Whether two distinct curves have disjoint representatives."""
    w1, w2 = tuple(w1), tuple(w2)
    if w1 == w2:
        raise SameClass("a class is never compared with itself")
    s = tuple(a + b for a, b in zip(w1, w2))
    if not is_admissible(T, s):
        return False
    # normal multicurves are determined by their weights, so once one
    # component is w1 (or w2) the remainder is the other curve
    corners = [corner_counts(side_weights(T, s, i)) for i in range(T.t)]
    e0 = next(i for i, x in enumerate(s) if x)
    comp = _walk(T, s, corners, e0, limit=max(sum(w1), sum(w2)))
    return comp == w1 or comp == w2


# -- flips -------------------------------------------------------------------

def transport_flip(T: Triangulation, w: Sequence[int], e: int) -> Weights:
    """Weights of the same multicurve on ``flip(T, e)``."""
    try:
        quad = T.quad_edges(e)
    except UnflippableEdge as exc:
        raise Untransportable(f"untransportable across this flip: {exc}") from None
    if len(set(quad) | {e}) != 5:
        raise Untransportable(f"untransportable across this flip: quadrilateral around {e} is degenerate")
    q0, q1, q2, q3 = quad
    out = list(w)
    out[e] = max(w[q0] + w[q2], w[q1] + w[q3]) - w[e]
    return tuple(out)


def transportable_edges(T: Triangulation) -> list[int]:
    out = []
    for e in T.flippable_edges():
        if len(set(T.quad_edges(e)) | {e}) == 5:
            out.append(e)
    return out


# -- enumeration -------------------------------------------------------------

def _edge_order(T: Triangulation) -> tuple[list[int], list[list[int]]]:
    """Edge order for backtracking plus the triangles completed at each step."""
    order: list[int] = []
    seen = set()
    for tri in range(T.t):
        for s in range(3):
            e = T.edge_of_slot[3 * tri + s]
            if e not in seen:
                seen.add(e)
                order.append(e)
    pos = {e: i for i, e in enumerate(order)}
    done_at: list[list[int]] = [[] for _ in order]
    for tri in range(T.t):
        last = max(pos[T.edge_of_slot[3 * tri + s]] for s in range(3))
        done_at[last].append(tri)
    return order, done_at


def admissible_vectors(T: Triangulation, bound: int):
    """All nonzero admissible weight vectors with entries ``<= bound``."""
    order, done_at = _edge_order(T)
    es = T.edge_of_slot
    tri_edges = [(es[3 * i], es[3 * i + 1], es[3 * i + 2]) for i in range(T.t)]
    w = [0] * T.num_edges
    n = len(order)

    def rec(i):
        if i == n:
            yield tuple(w)
            return
        e = order[i]
        for val in range(bound + 1):
            w[e] = val
            ok = True
            for tri in done_at[i]:
                a, b, c = tri_edges[tri]
                x, y, z = w[a], w[b], w[c]
                if (x + y + z) & 1 or x > y + z or y > x + z or z > x + y:
                    ok = False
                    break
            if ok:
                yield from rec(i + 1)
        w[e] = 0

    for vec in rec(0):
        if any(vec):
            yield vec


def enumerate_vertices(T: Triangulation, bound: int) -> list[CurveClass]:
    """Nontrivial curves with every edge weight ``<= bound``, sorted by weights."""
    out = []
    for vec in admissible_vectors(T, bound):
        if not is_connected(T, vec):
            continue
        cls = classify_pieces(vec, _cut(T, vec)).curve
        if cls is not None:
            out.append(cls)
    out.sort(key=lambda c: c.weights)
    return out


# -- arcs --------------------------------------------------------------------

def weights_from_corners(T: Triangulation, corners) -> Weights:
    w: list[int | None] = [None] * T.num_edges
    for tri in range(T.t):
        c = corners[tri]
        for s in range(3):
            e = T.edge_of_slot[3 * tri + s]
            val = c[s] + c[(s + 1) % 3]
            if w[e] is None:
                w[e] = val
            elif w[e] != val:
                raise ValueError(f"corner counts disagree across edge {e}")
    return tuple(w)  # type: ignore[arg-type]


def peripheral_curve(T: Triangulation, p: int) -> Weights:
    """Curve around puncture ``p``: it crosses each edge once per end at ``p``."""
    cp = T.corner_puncture
    corners = [tuple(1 if cp[3 * tri + v] == p else 0 for v in range(3)) for tri in range(T.t)]
    return weights_from_corners(T, corners)


def arc_neighborhood_curves(T: Triangulation, e: int) -> list[Weights]:
    """Boundary curves of a regular neighbourhood of edge ``e`` and its endpoints.

    Start from the curves around the endpoints and band them together along
    the edge: at each end of the edge the corner arcs crossing it are traded
    for an arc around the opposite corner of the triangle.
    """
    cp = T.corner_puncture
    ends = set(T.edge_endpoints(e))
    corners = [[1 if cp[3 * tri + v] in ends else 0 for v in range(3)] for tri in range(T.t)]
    a, b, _ = T.edges[e]
    for slot in (a, b):
        tri, s = divmod(slot, 3)
        corners[tri][s] -= 1
        corners[tri][(s + 1) % 3] -= 1
        corners[tri][(s + 2) % 3] += 1
    if any(x < 0 for c in corners for x in c):
        raise ValueError(f"edge {e}: neighbourhood boundary is not normal by corner walk")
    w = weights_from_corners(T, corners)
    if not any(w):
        return []
    return trace(T, w)


@dataclass
class CurveFile:
    """JSON curve record: weights on a named triangulation."""
    triangulation: str
    weights: Weights = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"triangulation": self.triangulation, "weights": list(self.weights)}

    @classmethod
    def from_json(cls, data: dict) -> "CurveFile":
        return cls(str(data["triangulation"]), tuple(int(x) for x in data["weights"]))
