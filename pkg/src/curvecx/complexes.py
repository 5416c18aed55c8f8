"""Bounded snapshots of the complex of curves and the structures built on them."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import normalcurves as nc
from .normalcurves import CurveClass, Weights
from .surface import (HypothesisError, SurfaceSig, eq1_holds, maximal_simplex_range)
from .triangulation import Triangulation, build_reference


class UnknownVertex(KeyError):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CURVECX_THREADS", "1")))
    except ValueError:
        return 1


_WORKER: dict = {}


def _init_worker(T, weights):
    _WORKER["T"] = T
    _WORKER["weights"] = weights


def _rows_chunk(indices):
    T, weights = _WORKER["T"], _WORKER["weights"]
    return [(i, _row_bits(T, weights, i, range(i + 1, len(weights)))) for i in indices]


def _row_bits(T, weights, i, others) -> int:
    bits = 0
    wi = weights[i]
    for j in others:
        if j != i and nc.disjoint(T, wi, weights[j]):
            bits |= 1 << j
    return bits


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


@dataclass
class ComplexSnapshot:
    """Curves with edge weights at most ``bound`` and their disjointness relation.

    Adjacency rows are bitsets over vertex ids.  A snapshot built lazily
    fills rows on first use; queries never depend on which rows are cached.
    """
    surface: SurfaceSig
    triangulation: Triangulation
    bound: int
    vertices: list[CurveClass]
    _rows: dict[int, int] = field(default_factory=dict, repr=False)
    _pairs: dict[tuple[int, int], bool] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {v.weights: i for i, v in enumerate(self.vertices)}
        self.weights = [v.weights for v in self.vertices]

    def __len__(self):
        return len(self.vertices)

    @property
    def triangulation_id(self) -> str:
        return nc.triangulation_id(self.triangulation)

    def vertex(self, i: int) -> CurveClass:
        if not 0 <= i < len(self.vertices):
            raise UnknownVertex(i)
        return self.vertices[i]

    def id_of(self, weights: Sequence[int]) -> int:
        try:
            return self.index[tuple(weights)]
        except KeyError:
            raise UnknownVertex(tuple(weights)) from None

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            raise ValueError("a vertex is not adjacent to itself")
        if i in self._rows:
            return bool(self._rows[i] >> j & 1)
        if j in self._rows:
            return bool(self._rows[j] >> i & 1)
        key = (i, j) if i < j else (j, i)
        hit = self._pairs.get(key)
        if hit is None:
            hit = self._pairs[key] = nc.disjoint(self.triangulation, self.weights[i], self.weights[j])
        return hit

    def row(self, i: int) -> int:
        """Bitset of the vertices disjoint from ``i``."""
        self.vertex(i)
        bits = self._rows.get(i)
        if bits is None:
            bits = 0
            for j in range(len(self.vertices)):
                if j != i and self.adjacent(i, j):
                    bits |= 1 << j
            self._rows[i] = bits
        return bits

    def neighbors(self, i: int) -> list[int]:
        return _bits(self.row(i))

    @property
    def complete(self) -> bool:
        return len(self._rows) == len(self.vertices)

    def materialize(self, threads: int | None = None) -> "ComplexSnapshot":
        """Compute every adjacency row."""
        if self.complete:
            return self
        n = len(self.vertices)
        threads = threads or _threads()
        upper: dict[int, int] = {}
        if threads > 1 and n > 64:
            chunks = [list(range(k, n, threads * 4)) for k in range(threads * 4)]
            with ProcessPoolExecutor(threads, initializer=_init_worker,
                                     initargs=(self.triangulation, self.weights)) as pool:
                for part in pool.map(_rows_chunk, chunks):
                    upper.update(part)
        else:
            for i in range(n):
                upper[i] = _row_bits(self.triangulation, self.weights, i, range(i + 1, n))
        rows = [0] * n
        for i in range(n):
            rows[i] |= upper[i]
            for j in _bits(upper[i]):
                rows[j] |= 1 << i
        self._rows = dict(enumerate(rows))
        return self

    def edges(self) -> list[tuple[int, int]]:
        self.materialize()
        return [(i, j) for i in range(len(self.vertices)) for j in _bits(self._rows[i]) if j > i]

    def to_json(self) -> dict:
        return {"surface": self.surface.to_json(), "triangulation": self.triangulation.to_json(),
                "triangulation_id": self.triangulation_id, "bound": self.bound,
                "vertices": [dict(id=i, **v.to_json()) for i, v in enumerate(self.vertices)],
                "adjacency": [list(p) for p in self.edges()]}


def build_snapshot(sig: SurfaceSig, bound: int, lazy: bool = False,
                   triangulation: Triangulation | None = None) -> ComplexSnapshot:
    T = triangulation or build_reference(sig)
    if T.surface != sig:
        raise ValueError(f"triangulation realizes {T.surface}, not {sig}")
    snap = ComplexSnapshot(sig, T, bound, nc.enumerate_vertices(T, bound))
    if not lazy:
        snap.materialize()
    return snap


# -- links -------------------------------------------------------------------

@dataclass
class DualLinkView:
    center: int
    vertices: list[int]
    link_edges: list[tuple[int, int]]
    dual_edges: list[tuple[int, int]]
    components: list[list[int]]

    @property
    def connected(self) -> bool:
        return len(self.components) <= 1

    def to_json(self) -> dict:
        return {"center": self.center, "vertices": self.vertices,
                "dual_edges": [list(p) for p in self.dual_edges],
                "components": self.components}


def _components(vertices: list[int], joined) -> list[list[int]]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for a, b in joined:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in vertices:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def link(snap: ComplexSnapshot, v: int) -> DualLinkView:
    """Link of ``v`` with both its own edges and the complementary (dual) edges."""
    verts = snap.neighbors(v)
    inside, outside = [], []
    for x, a in enumerate(verts):
        for b in verts[x + 1:]:
            (inside if snap.adjacent(a, b) else outside).append((a, b))
    return DualLinkView(v, verts, inside, outside, _components(verts, outside))


dual_link = link


def side_partition(snap: ComplexSnapshot, v: int) -> dict[int, int]:
    """Piece of the cut surface (index into ``cut_along(v)``) for each link vertex."""
    cls = snap.vertex(v)
    if not cls.separating:
        raise ValueError(f"vertex {v} is {cls.kind}, not separating")
    T = snap.triangulation
    sides = {u: nc.side_of(T, cls.weights, snap.weights[u]) for u in snap.neighbors(v)}
    for a, b in link(snap, v).dual_edges:
        if sides[a] != sides[b]:
            raise AssertionError(f"dual-link edge ({a}, {b}) crosses the partition of {v}")
    return sides


# -- maximal simplices ---------------------------------------------------------

def maximal_cliques(rows: dict[int, int] | Sequence[int], candidates: int | None = None) -> list[list[int]]:
    """All maximal cliques of a graph given by bitset rows (Bron-Kerbosch, Tomita pivot)."""
    rows = dict(enumerate(rows)) if not isinstance(rows, dict) else rows
    if candidates is None:
        candidates = 0
        for i in rows:
            candidates |= 1 << i
    out: list[list[int]] = []

    def expand(r: list[int], p: int, x: int):
        if not p and not x:
            out.append(sorted(r))
            return
        pivot_pool = p | x
        best, best_n = -1, -1
        for u in _bits(pivot_pool):
            k = bin(p & rows[u]).count("1")
            if k > best_n:
                best, best_n = u, k
        for v in _bits(p & ~rows[best]):
            expand(r + [v], p & rows[v], x & rows[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand([], candidates, 0)
    out.sort()
    return out


@dataclass(frozen=True)
class CliqueAudit:
    clique: tuple[int, ...]
    dimension: int
    onesided: int
    eq1_ok: bool | None
    certified: bool

    def to_json(self) -> dict:
        return {"clique": list(self.clique), "dimension": self.dimension, "m": self.onesided,
                "eq1_ok": self.eq1_ok, "certified": self.certified}


def audit_clique(snap: ComplexSnapshot, clique: Iterable[int]) -> CliqueAudit:
    sig = snap.surface
    clique = tuple(sorted(clique))
    dim = len(clique) - 1
    m = sum(1 for i in clique if snap.vertices[i].one_sided)
    try:
        eq1 = eq1_holds(sig, dim, m)
    except HypothesisError:
        eq1 = None
    try:
        rng = maximal_simplex_range(sig)
    except HypothesisError:
        rng = None
    certified = rng is not None and dim == rng.hi
    if not sig.orientable and sig.genus >= 3 and eq1:
        certified = certified or (m % 2 == sig.genus % 2)
    return CliqueAudit(clique, dim, m, eq1, certified)


def maximal_simplices(snap: ComplexSnapshot) -> list[CliqueAudit]:
    snap.materialize()
    return [audit_clique(snap, c) for c in maximal_cliques(snap._rows)]


def is_simplex(snap: ComplexSnapshot, ids: Sequence[int]) -> bool:
    ids = list(ids)
    if len(set(ids)) != len(ids):
        return False
    return all(snap.adjacent(a, b) for x, a in enumerate(ids) for b in ids[x + 1:])


# -- pentagons -----------------------------------------------------------------

def is_pentagon(snap: ComplexSnapshot, ids: Sequence[int]) -> bool:
    ids = list(ids)
    if len(ids) != 5 or len(set(ids)) != 5:
        raise ValueError("a pentagon needs five distinct vertices")
    for i in range(5):
        for j in range(i + 1, 5):
            consecutive = j - i in (1, 4)
            if snap.adjacent(ids[i], ids[j]) != consecutive:
                return False
    return True


def same_pentagon(p: Sequence[int], q: Sequence[int]) -> bool:
    """Equality up to cyclic permutations and inversion."""
    p, q = list(p), list(q)
    for k in range(5):
        rot = q[k:] + q[:k]
        if rot == p or rot[::-1] == p:
            return True
    return False


@dataclass
class SimplePairWitness:
    gammas: list[int]          # gamma_1 ... gamma_{n-1}
    delta: int

    def to_json(self) -> dict:
        return {"gammas": self.gammas, "delta": self.delta}


def _sep(snap, i, k) -> bool:
    return snap.vertices[i].is_k_separating(k)


def _require_genus_one(snap: ComplexSnapshot, alpha: int, beta: int) -> int:
    sig = snap.surface
    if sig.orientable or sig.genus != 1 or sig.punctures < 5:
        raise ValueError(f"simple-pair witnesses need N1,n with n >= 5, not {sig}")
    for x in (alpha, beta):
        if not _sep(snap, x, 2):
            raise ValueError(f"vertex {x} is not 2-separating")
    return sig.punctures


def check_simple_pair_witness(snap: ComplexSnapshot, alpha: int, beta: int,
                              w: SimplePairWitness) -> dict[str, bool]:
    """Re-check the three witness conditions; one entry per condition."""
    n = _require_genus_one(snap, alpha, beta)
    g = w.gammas
    if len(g) != n - 1:
        return {"pentagon": False, "types": False, "simplices": False}
    ids = [alpha, beta, *g, w.delta]
    if len(set(ids)) != len(ids):
        return {"pentagon": False, "types": False, "simplices": False}
    types = (_sep(snap, g[0], 2) and _sep(snap, g[1], 3)
             and all(_sep(snap, g[k - 1], k) for k in range(3, n))
             and snap.vertices[w.delta].one_sided)
    sigma = list(g[3:]) + [w.delta]
    simplices = [[alpha, g[2]], [alpha, g[1]], [beta, g[2]], [g[0], g[1]]]
    simplices_ok = all(is_simplex(snap, s + sigma) and len(s + sigma) - 1 == n - 2 for s in simplices)
    return {"pentagon": is_pentagon(snap, [g[0], g[1], alpha, g[2], beta]),
            "types": types, "simplices": simplices_ok}


def _pick_clique(snap, pool: int, wanted: list, chosen: list):
    """Choose one vertex per predicate in ``wanted`` from ``pool``, pairwise adjacent."""
    if not wanted:
        return list(chosen)
    pred = wanted[0]
    for v in _bits(pool):
        if pred(v):
            res = _pick_clique(snap, pool & snap.row(v), wanted[1:], chosen + [v])
            if res is not None:
                return res
    return None


def find_simple_pair_witness(snap: ComplexSnapshot, alpha: int, beta: int) -> SimplePairWitness | None:
    """Search the snapshot for curves certifying that alpha, beta form a simple pair.

    ``None`` means no witness among curves of weight ``<= snap.bound``; it
    is not a proof that the pair is not simple.
    """
    n = _require_genus_one(snap, alpha, beta)
    ra, rb = snap.row(alpha), snap.row(beta)
    if ra >> beta & 1:
        return None
    for g3 in _bits(ra & rb):
        if not _sep(snap, g3, 3):
            continue
        r3 = snap.row(g3)
        for g2 in _bits(ra & ~rb & ~r3):
            if g2 in (alpha, beta, g3) or not _sep(snap, g2, 3):
                continue
            r2 = snap.row(g2)
            for g1 in _bits(r2 & rb & ~ra & ~r3):
                if g1 in (alpha, beta, g3, g2) or not _sep(snap, g1, 2):
                    continue
                pool = ra & rb & r3 & r2 & snap.row(g1)
                wanted = [lambda v, k=k: _sep(snap, v, k) for k in range(4, n)]
                wanted.append(lambda v: snap.vertices[v].one_sided)
                rest = _pick_clique(snap, pool, wanted, [])
                if rest is not None:
                    return SimplePairWitness([g1, g2, g3, *rest[:-1]], rest[-1])
    return None


def check_sphere_witness(snap: ComplexSnapshot, alpha: int, beta: int, gammas: Sequence[int]) -> bool:
    """Conditions (i)-(iii) of the sphere characterization of simple pairs."""
    sig = snap.surface
    n = sig.punctures
    if not sig.orientable or sig.genus != 0 or n < 5:
        raise ValueError(f"sphere witnesses need S0,n with n >= 5, not {sig}")
    for x in (alpha, beta):
        if not _sep(snap, x, 2):
            raise ValueError(f"vertex {x} is not 2-separating")
    g = list(gammas)
    if len(g) != n - 2 or len(set(g) | {alpha, beta}) != n:
        return False
    types = _sep(snap, g[0], 2) and _sep(snap, g[n - 3], 2) and _sep(snap, g[1], 3)
    for k in range(3, n // 2 + 1):
        types = types and _sep(snap, g[k - 1], k) and _sep(snap, g[n - k - 1], k)
    if not types:
        return False
    if not is_pentagon(snap, [g[0], g[1], alpha, g[2], beta]):
        return False
    sigma = g[3:]
    dim = n - 4
    return all(is_simplex(snap, s + sigma) and len(s + sigma) - 1 == dim
               for s in ([alpha, g[2]], [alpha, g[1]], [beta, g[2]], [g[0], g[1]]))


def find_sphere_witness(snap: ComplexSnapshot, alpha: int, beta: int) -> list[int] | None:
    n = snap.surface.punctures
    ra, rb = snap.row(alpha), snap.row(beta)
    for g3 in _bits(ra & rb):
        r3 = snap.row(g3)
        for g2 in _bits(ra & ~rb & ~r3):
            if g2 in (alpha, beta, g3) or not _sep(snap, g2, 3):
                continue
            r2 = snap.row(g2)
            for g1 in _bits(r2 & rb & ~ra & ~r3):
                if g1 in (alpha, beta, g3, g2) or not _sep(snap, g1, 2):
                    continue
                pool = ra & rb & r3 & r2 & snap.row(g1)
                rest = _pick_clique(snap, pool, [lambda v: True] * (n - 5), [])
                if rest is None:
                    continue
                cand = [g1, g2, g3, *rest]
                if check_sphere_witness(snap, alpha, beta, cand):
                    return cand
    return None


# -- arcs ------------------------------------------------------------------------

def is_chain(T: Triangulation, arcs: Sequence[int]) -> bool:
    """Consecutive edges share exactly one endpoint and all endpoints differ."""
    arcs = list(arcs)
    if not arcs or len(set(arcs)) != len(arcs):
        return False
    ends = [T.edge_endpoints(e) for e in arcs]
    if any(p == q for p, q in ends):
        return False
    if len(arcs) == 1:
        return True
    shared = set(ends[0]) & set(ends[1])
    if len(shared) != 1:
        return False
    (mid,) = shared
    seq = [ends[0][0] if ends[0][1] == mid else ends[0][1], mid]
    for p, q in ends[1:]:
        if seq[-1] == p:
            seq.append(q)
        elif seq[-1] == q:
            seq.append(p)
        else:
            return False
    return len(set(seq)) == len(seq)


def good_triangles(T: Triangulation) -> list[int]:
    cp = T.corner_puncture
    es = T.edge_of_slot
    out = []
    for tri in range(T.t):
        if len({cp[3 * tri + v] for v in range(3)}) == 3 and len({es[3 * tri + s] for s in range(3)}) == 3:
            out.append(tri)
    return out


def reference_chain(T: Triangulation, length: int) -> list[int]:
    """A chain of ``length`` edges, found by depth-first search over distinct punctures."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in range(T.num_edges):
        p, q = T.edge_endpoints(e)
        if p != q:
            adj.setdefault(p, []).append((q, e))
            adj.setdefault(q, []).append((p, e))

    def dfs(path_p, path_e):
        if len(path_e) == length:
            return list(path_e)
        for q, e in sorted(adj.get(path_p[-1], []), key=lambda x: x[1]):
            if q not in path_p:
                res = dfs(path_p + [q], path_e + [e])
                if res:
                    return res
        return None

    for start in sorted(adj):
        res = dfs([start], [])
        if res:
            return res
    raise ValueError(f"no chain of length {length}")


def arc_vertex(snap: ComplexSnapshot, e: int) -> int | None:
    """Snapshot id of the curve around edge ``e`` (if it is a single nontrivial curve in range)."""
    curves = nc.arc_neighborhood_curves(snap.triangulation, e)
    if len(curves) != 1:
        return None
    return snap.index.get(curves[0])
