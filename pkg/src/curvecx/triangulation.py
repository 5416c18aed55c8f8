"""Combinatorial ideal triangulations of punctured surfaces.

A triangulation with ``t`` triangles has ``3t`` side slots, slot
``3*tri + side``.  Side ``s`` of a triangle runs from its corner ``s`` to
corner ``(s + 1) % 3``.  The gluing is stored as an ordered list of edges
``(slot_a, slot_b, reversed)``; the position in that list is the edge index,
and flips keep every other edge at its index.

``reversed=False`` ("parallel") identifies corner ``s`` of one side with
corner ``s'`` of the other; ``reversed=True`` ("antiparallel") identifies
corner ``s`` with corner ``s' + 1``.  Two triangles carrying the same
orientation glue coherently exactly along antiparallel sides.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .surface import NoIdealTriangulation, SurfaceSig, euler_char

PARALLEL = "parallel"
ANTIPARALLEL = "antiparallel"

_PERMS = tuple(itertools.permutations(range(3)))


class InvalidTriangulation(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class UnflippableEdge(ValueError):
    pass


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def side_of(u: int, v: int) -> tuple[int, bool]:
    """Side joining local corners ``u`` and ``v``; flag tells if ``u -> v`` runs backwards."""
    if (u + 1) % 3 == v:
        return u, False
    return v, True


class Triangulation:
    """An immutable gluing of ``t`` triangles.

    Construction only checks that slot numbers are in range; use
    :func:`validate` (or :meth:`check`) for the topological invariants.
    """

    def __init__(self, t: int, edges):
        self.t = int(t)
        self.edges = tuple((int(a), int(b), bool(r)) for a, b, r in edges)
        for a, b, _ in self.edges:
            if not (0 <= a < 3 * self.t and 0 <= b < 3 * self.t):
                raise InvalidTriangulation([f"slot out of range in edge ({a}, {b})"])

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {"t": self.t,
                "gluing": [[a, b, ANTIPARALLEL if r else PARALLEL] for a, b, r in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Triangulation":
        edges = []
        for a, b, flag in data["gluing"]:
            if flag not in (PARALLEL, ANTIPARALLEL):
                raise ValueError(f"unknown gluing flag {flag!r}")
            edges.append((a, b, flag == ANTIPARALLEL))
        return cls(data["t"], edges)

    def __eq__(self, other):
        return isinstance(other, Triangulation) and (self.t, self.edges) == (other.t, other.edges)

    def __hash__(self):
        return hash((self.t, self.edges))

    def __repr__(self):
        return f"Triangulation(t={self.t}, edges={list(self.edges)!r})"

    # -- structure -----------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def structural_problems(self) -> list[str]:
        problems = []
        seen = {}
        for i, (a, b, _) in enumerate(self.edges):
            if a == b:
                problems.append(f"fixed point in gluing: slot {a} matched to itself")
            for s in (a, b) if a != b else (a,):
                if s in seen:
                    problems.append(f"slot {s} matched twice (edges {seen[s]} and {i})")
                seen[s] = i
        missing = sorted(set(range(3 * self.t)) - set(seen))
        if missing:
            problems.append(f"unmatched slots {missing}")
        return problems

    def check(self) -> "Triangulation":
        if "_checked" not in self.__dict__:
            problems = self.structural_problems()
            if not problems and not self.connected:
                problems.append("gluing graph is not connected")
            if problems:
                raise InvalidTriangulation(problems)
            self.__dict__["_checked"] = True
        return self

    @cached_property
    def partner(self) -> tuple[int, ...]:
        p = [-1] * (3 * self.t)
        for a, b, _ in self.edges:
            p[a] = b
            p[b] = a
        return tuple(p)

    @cached_property
    def edge_of_slot(self) -> tuple[int, ...]:
        m = [-1] * (3 * self.t)
        for i, (a, b, _) in enumerate(self.edges):
            m[a] = i
            m[b] = i
        return tuple(m)

    def reversed_at(self, slot: int) -> bool:
        return self.edges[self.edge_of_slot[slot]][2]

    def glued_corner(self, slot: int, end: int) -> int:
        """Corner identified with end ``end`` (0 or 1) of side ``slot``, across the gluing."""
        other = self.partner[slot]
        tri, side = divmod(other, 3)
        if self.reversed_at(slot):
            end = 1 - end
        return 3 * tri + (side + end) % 3

    @cached_property
    def connected(self) -> bool:
        if self.t == 0:
            return False
        parent = list(range(self.t))
        for a, b, _ in self.edges:
            ra, rb = _find(parent, a // 3), _find(parent, b // 3)
            parent[ra] = rb
        return len({_find(parent, i) for i in range(self.t)}) == 1

    @cached_property
    def corner_puncture(self) -> tuple[int, ...]:
        """Puncture label of every corner; labels ordered by smallest corner."""
        parent = list(range(3 * self.t))
        for a, b, r in self.edges:
            ta, sa = divmod(a, 3)
            tb, sb = divmod(b, 3)
            for end in (0, 1):
                other_end = 1 - end if r else end
                x = _find(parent, 3 * ta + (sa + end) % 3)
                y = _find(parent, 3 * tb + (sb + other_end) % 3)
                parent[x] = y
        labels: dict[int, int] = {}
        out = []
        for c in range(3 * self.t):
            root = _find(parent, c)
            out.append(labels.setdefault(root, len(labels)))
        return tuple(out)

    @property
    def num_punctures(self) -> int:
        return len(set(self.corner_puncture))

    def puncture_corners(self, p: int) -> list[int]:
        return [c for c, q in enumerate(self.corner_puncture) if q == p]

    @cached_property
    def triangle_signs(self) -> tuple[int, ...] | None:
        """A coherent orientation sign per triangle, or ``None`` if none exists."""
        sign = [0] * self.t
        adj = [[] for _ in range(self.t)]
        for a, b, r in self.edges:
            rel = 1 if r else -1
            adj[a // 3].append((b // 3, rel))
            adj[b // 3].append((a // 3, rel))
        for start in range(self.t):
            if sign[start]:
                continue
            sign[start] = 1
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y, rel in adj[x]:
                    want = sign[x] * rel
                    if sign[y] == 0:
                        sign[y] = want
                        queue.append(y)
                    elif sign[y] != want:
                        return None
        return tuple(sign)

    @property
    def orientable(self) -> bool:
        return self.triangle_signs is not None

    @cached_property
    def surface(self) -> SurfaceSig:
        self.check()
        p = self.num_punctures
        closed_chi = p - self.num_edges + self.t
        if self.orientable:
            return SurfaceSig(True, (2 - closed_chi) // 2, p)
        return SurfaceSig(False, 2 - closed_chi, p)

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        a = self.edges[e][0]
        tri, side = divmod(a, 3)
        cp = self.corner_puncture
        return cp[3 * tri + side], cp[3 * tri + (side + 1) % 3]

    def is_self_folded(self, e: int) -> bool:
        a, b, _ = self.edges[e]
        return a // 3 == b // 3

    def flippable_edges(self) -> list[int]:
        return [e for e in range(self.num_edges) if not self.is_self_folded(e)]

    def quad_edges(self, e: int) -> tuple[int, int, int, int]:
        """Outer edges of the quadrilateral around ``e`` in cyclic order.

        The order is (B side at u, B side at v, A side at v, A side at u) where
        ``A`` holds the first slot of ``e`` and ``u, v`` are its ends, so that
        entries 0/2 and 1/3 are opposite sides.
        """
        if self.is_self_folded(e):
            raise UnflippableEdge(f"unflippable edge {e}: self-folded")
        a, b, r = self.edges[e]
        ta, sa = divmod(a, 3)
        tb, sb = divmod(b, 3)
        es = self.edge_of_slot
        a_vu = es[3 * ta + (sa + 1) % 3]   # A side from v to the apex
        a_au = es[3 * ta + (sa + 2) % 3]   # A side from the apex to u
        b_1 = es[3 * tb + (sb + 1) % 3]    # B side starting at B corner sb+1
        b_2 = es[3 * tb + (sb + 2) % 3]    # B side ending at B corner sb
        # antiparallel: B corner sb is v, sb+1 is u
        if r:
            b_u, b_v = b_1, b_2
        else:
            b_u, b_v = b_2, b_1
        return b_u, b_v, a_vu, a_au


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    euler_char: int
    orientable: bool
    genus: int
    punctures: int

    @property
    def surface(self) -> SurfaceSig:
        return SurfaceSig(self.orientable, self.genus, self.punctures)

    def to_json(self) -> dict:
        return {"connected": self.connected, "euler_char": self.euler_char,
                "orientable": self.orientable, "genus": self.genus, "punctures": self.punctures}


def validate(T: Triangulation) -> ValidationReport:
    T.check()
    sig = T.surface
    chi = T.t - T.num_edges
    assert chi == euler_char(sig)
    return ValidationReport(True, chi, sig.orientable, sig.genus, sig.punctures)


# -- reference triangulations ------------------------------------------------

class _Builder:
    """Triangles given by labelled, directed sides; equal labels get glued."""

    def __init__(self):
        self.tris: list[list[tuple[str, int]]] = []
        self.corners: list[list[str]] = []
        self._fresh = 0

    def fresh(self, prefix):
        self._fresh += 1
        return f"{prefix}{self._fresh}"

    def add(self, corners, sides):
        self.tris.append(list(sides))
        self.corners.append(list(corners))
        return len(self.tris) - 1

    def split(self, i, label):
        """Insert a new puncture inside triangle ``i``; returns the new triangle indices."""
        (x, y, z), (s0, s1, s2) = self.corners[i], self.tris[i]
        px, py, pz = self.fresh("p"), self.fresh("p"), self.fresh("p")
        self.tris[i] = [(px, 1), s0, (py, -1)]
        self.corners[i] = [label, x, y]
        j = self.add([label, y, z], [(py, 1), s1, (pz, -1)])
        k = self.add([label, z, x], [(pz, 1), s2, (px, -1)])
        return i, j, k

    def build(self) -> Triangulation:
        where: dict[str, list[tuple[int, int]]] = {}
        for ti, sides in enumerate(self.tris):
            for s, (label, sign) in enumerate(sides):
                where.setdefault(label, []).append((3 * ti + s, sign))
        edges = []
        for label, slots in where.items():
            assert len(slots) == 2, label
            (a, sa), (b, sb) = sorted(slots)
            edges.append((a, b, sa != sb))
        edges.sort()
        return Triangulation(len(self.tris), edges)


def _polygon_word(sig: SurfaceSig) -> list[tuple[str, int]]:
    word = []
    for i in range(sig.genus):
        if sig.orientable:
            word += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
        else:
            word += [(f"c{i}", 1), (f"c{i}", 1)]
    return word


def build_reference(sig: SurfaceSig) -> Triangulation:
    """Deterministic ideal triangulation realizing ``sig``.

    The closed surface is cut into its standard polygon (all polygon corners
    become one puncture).  With one puncture the polygon is fan-triangulated,
    otherwise it is coned from a central puncture.  Extra punctures are
    inserted one at a time, each inside a triangle touching the previous one,
    so consecutive punctures are joined by an edge.  Spheres start from two
    triangles glued along their boundary.
    """
    n = sig.punctures
    if n < 1 or euler_char(sig) >= 0:
        raise NoIdealTriangulation(f"{sig}: no ideal triangulation (needs n >= 1 and chi < 0)")
    bld = _Builder()
    if sig.genus == 0:
        bld.add(["P0", "P1", "P2"], [("x", 1), ("y", 1), ("z", 1)])
        bld.add(["P0", "P2", "P1"], [("z", -1), ("y", -1), ("x", -1)])
        placed, last = 3, 0
    else:
        word = _polygon_word(sig)
        L = len(word)
        if n == 1:
            for i in range(1, L - 1):
                left = word[0] if i == 1 else (f"d{i}", 1)
                right = word[L - 1] if i + 1 == L - 1 else (f"d{i + 1}", -1)
                bld.add(["V", "V", "V"], [left, word[i], right])
            placed, last = 1, 0
        else:
            for i in range(L):
                bld.add(["C", "V", "V"], [(f"r{i}", 1), word[i], (f"r{(i + 1) % L}", -1)])
            placed, last = 2, 0
    while placed < n:
        _, last, _ = bld.split(last, f"P{placed}")
        placed += 1
    T = bld.build()
    T.check()
    assert T.surface == sig, (T.surface, sig)
    return T


# -- flips ---------------------------------------------------------------

def flip(T: Triangulation, e: int) -> Triangulation:
    """Replace edge ``e`` by the other diagonal of its quadrilateral.

    The new diagonal keeps index ``e``; every other edge keeps its index.
    """
    return _flip_with_corners(T, e)[0]


def _flip_with_corners(T: Triangulation, e: int):
    T.check()
    a, b, r = T.edges[e]
    ta, sa = divmod(a, 3)
    tb, sb = divmod(b, 3)
    if ta == tb:
        raise UnflippableEdge(f"unflippable edge {e}: self-folded")
    # quad corners: u = A[sa], v = A[sa+1], apex a = A[sa+2], apex b = B[sb+2]
    A = lambda k: 3 * ta + (sa + k) % 3  # noqa: E731
    B = lambda k: 3 * tb + (sb + k) % 3  # noqa: E731
    # new triangles (u, b, a) at index ta and (b, v, a) at index tb
    new_corner_old = {3 * ta: A(0), 3 * ta + 1: B(2), 3 * ta + 2: A(2),
                      3 * tb: B(2), 3 * tb + 1: A(1), 3 * tb + 2: A(2)}
    # old outer slot -> (new slot, direction reversed)
    remap = {A(1): (3 * tb + 1, False),         # v -> a
             A(2): (3 * ta + 2, False)}         # a -> u
    if r:
        remap[B(1)] = (3 * ta + 0, False)       # u -> b
        remap[B(2)] = (3 * tb + 0, False)       # b -> v
    else:
        remap[B(1)] = (3 * tb + 0, True)        # v -> b, new side is b -> v
        remap[B(2)] = (3 * ta + 0, True)        # b -> u, new side is u -> b
    edges = []
    for i, (x, y, rev) in enumerate(T.edges):
        if i == e:
            edges.append((3 * ta + 1, 3 * tb + 2, True))
            continue
        nx_, fx = remap.get(x, (x, False))
        ny_, fy = remap.get(y, (y, False))
        edges.append((nx_, ny_, rev ^ fx ^ fy))
    out = Triangulation(T.t, edges)
    corner_map = list(range(3 * T.t))
    for c, old in new_corner_old.items():
        corner_map[c] = old
    return out, corner_map


def puncture_map_after_flip(T: Triangulation, e: int) -> dict[int, int]:
    """Puncture of ``flip(T, e)`` -> puncture of ``T`` (a bijection)."""
    T2, corners = _flip_with_corners(T, e)
    cp_old, cp_new = T.corner_puncture, T2.corner_puncture
    mapping: dict[int, int] = {}
    for c, old in enumerate(corners):
        q = mapping.setdefault(cp_new[c], cp_old[old])
        if q != cp_old[old]:
            raise AssertionError("flip does not preserve punctures")
    return mapping


def shared_edge_count(T: Triangulation, e: int) -> int:
    """Edges of ``T`` surviving ``flip(T, e)``: same index, same puncture endpoints."""
    T2 = flip(T, e)
    pmap = puncture_map_after_flip(T, e)
    count = 0
    for f in range(T.num_edges):
        if f == e:
            continue
        x, y = T2.edge_endpoints(f)
        if sorted((pmap[x], pmap[y])) == sorted(T.edge_endpoints(f)):
            count += 1
    return count


# -- canonical forms -------------------------------------------------------

def _labelling_from(T: Triangulation, start: int, perm):
    """Relabel by traversal from ``start`` (whose corners are permuted by ``perm``).

    Returns (code, order, perms): the encoded gluing, old triangle of every
    new index, and the corner permutation applied to each old triangle.
    """
    t = T.t
    new_index = [-1] * t
    perms: list = [None] * t
    order = [start]
    new_index[start] = 0
    perms[start] = perm
    code = []
    i = 0
    while i < len(order):
        old = order[i]
        pi = perms[old]
        inv = [0, 0, 0]
        for k in range(3):
            inv[pi[k]] = k
        for j in range(3):
            s, backwards = side_of(inv[j], inv[(j + 1) % 3])
            slot = 3 * old + s
            # old corners at new ends (j, j+1)
            ends = (inv[j], inv[(j + 1) % 3])
            glued = [T.glued_corner(slot, (ends[k] - s) % 3) for k in (0, 1)]
            other = glued[0] // 3
            if new_index[other] < 0:
                new_index[other] = len(order)
                order.append(other)
                oc = [glued[1] % 3, glued[0] % 3]
                third = 3 - oc[0] - oc[1]
                p = [0, 0, 0]
                p[oc[0]], p[oc[1]], p[third] = 0, 1, 2
                perms[other] = tuple(p)
            po = perms[other]
            n0, n1 = po[glued[0] % 3], po[glued[1] % 3]
            nside, rev = side_of(n0, n1)
            # rev=True means the partner side runs opposite: antiparallel
            code.append(3 * new_index[other] + nside)
            code.append(1 if rev else 0)
        i += 1
    return code, order, perms


def _canonical(T: Triangulation):
    T.check()
    best = None
    for start in range(T.t):
        for perm in _PERMS:
            code, order, perms = _labelling_from(T, start, perm)
            if best is None or code < best[0]:
                best = (code, order, perms)
    return best


def canonical_form(T: Triangulation) -> bytes:
    code = _canonical(T)[0]
    return bytes([T.t]) + bytes(code)


def canonical_edge_labels(T: Triangulation) -> list[int]:
    """Index of each edge of ``T`` in the canonically relabelled gluing."""
    _, order, perms = _canonical(T)
    new_index = {old: i for i, old in enumerate(order)}
    slot_label = {}
    for old in range(T.t):
        for s in range(3):
            nside, _ = side_of(perms[old][s], perms[old][(s + 1) % 3])
            slot_label[3 * old + s] = 3 * new_index[old] + nside
    return [min(slot_label[a], slot_label[b]) for a, b, _ in T.edges]


def edge_correspondence(T1: Triangulation, T2: Triangulation) -> list[int]:
    """For isomorphic triangulations, the edge of ``T2`` matching each edge of ``T1``."""
    if canonical_form(T1) != canonical_form(T2):
        raise ValueError("triangulations are not isomorphic")
    l1, l2 = canonical_edge_labels(T1), canonical_edge_labels(T2)
    back = {lab: f for f, lab in enumerate(l2)}
    return [back[lab] for lab in l1]


def relabel(T: Triangulation, tri_perm, corner_perms=None) -> Triangulation:
    """Renumber triangles (``old -> tri_perm[old]``) and permute their corners."""
    corner_perms = corner_perms or [(0, 1, 2)] * T.t
    def slot_map(slot):
        tri, s = divmod(slot, 3)
        p = corner_perms[tri]
        nside, rev = side_of(p[s], p[(s + 1) % 3])
        return 3 * tri_perm[tri] + nside, rev
    edges = []
    for a, b, r in T.edges:
        na, ra = slot_map(a)
        nb, rb = slot_map(b)
        edges.append((na, nb, r ^ ra ^ rb))
    return Triangulation(T.t, edges)


def random_relabel(T: Triangulation, rng: random.Random) -> Triangulation:
    perm = list(range(T.t))
    rng.shuffle(perm)
    corner_perms = [rng.choice(_PERMS) for _ in range(T.t)]
    edges = list(relabel(T, perm, corner_perms).edges)
    rng.shuffle(edges)
    return Triangulation(T.t, edges)


# -- flip graph search -----------------------------------------------------

@dataclass
class FlipGraph:
    nodes: list[bytes]
    edges: list[tuple[int, int]]
    depth: list[int]

    def to_json(self) -> dict:
        return {"nodes": [n.hex() for n in self.nodes], "depth": self.depth,
                "edges": [list(p) for p in self.edges]}


def flip_bfs(T: Triangulation, radius: int) -> FlipGraph:
    """Isomorphism classes reachable from ``T`` within ``radius`` flips."""
    start = canonical_form(T)
    reps = {start: T}
    depth = {start: 0}
    frontier = [start]
    edge_set = set()
    for d in range(radius):
        nxt = []
        for key in frontier:
            rep = reps[key]
            for f in rep.flippable_edges():
                other = flip(rep, f)
                k2 = canonical_form(other)
                if k2 not in reps:
                    reps[k2] = other
                    depth[k2] = d + 1
                    nxt.append(k2)
                if k2 != key:
                    edge_set.add(tuple(sorted((key, k2))))
        frontier = sorted(nxt)
    nodes = sorted(reps, key=lambda k: (depth[k], k))
    index = {k: i for i, k in enumerate(nodes)}
    edges = sorted(tuple(sorted((index[x], index[y]))) for x, y in edge_set)
    return FlipGraph(nodes, edges, [depth[k] for k in nodes])


def flip_path(T1: Triangulation, T2: Triangulation, max_depth: int) -> list[int] | None:
    """Edge indices to flip, in order, carrying ``T1`` to a copy of ``T2``.

    Bidirectional breadth-first search over isomorphism classes; returns
    ``None`` when no path of length ``<= max_depth`` exists.
    """
    if T1.surface != T2.surface:
        raise ValueError("triangulations of different surfaces")
    k1, k2 = canonical_form(T1), canonical_form(T2)
    if k1 == k2:
        return []
    fwd = {k1: (T1, None, None)}
    bwd = {k2: (T2, None, None)}
    fwd_frontier, bwd_frontier = [k1], [k2]
    fdepth = bdepth = 0
    meet = None
    while fdepth + bdepth < max_depth and fwd_frontier and bwd_frontier:
        if len(fwd_frontier) <= len(bwd_frontier):
            fwd_frontier = _expand(fwd, fwd_frontier)
            fdepth += 1
            hits = [k for k in fwd_frontier if k in bwd]
        else:
            bwd_frontier = _expand(bwd, bwd_frontier)
            bdepth += 1
            hits = [k for k in bwd_frontier if k in fwd]
        if hits:
            meet = min(hits)
            break
    if meet is None:
        return None
    path = []
    k = meet
    while fwd[k][1] is not None:
        path.append(fwd[k][2])
        k = fwd[k][1]
    path.reverse()
    # walk the backward tree towards T2, translating edges through isomorphisms
    current = fwd[meet][0]
    k = meet
    while bwd[k][1] is not None:
        node, parent, f = bwd[k]
        # node = flip(bwd[parent], f); flipping f at node returns to the parent class
        g = edge_correspondence(node, current)[f]
        path.append(g)
        current = flip(current, g)
        k = parent
    return path


def _expand(tree, frontier):
    nxt = []
    for k in frontier:
        rep = tree[k][0]
        for f in rep.flippable_edges():
            other = flip(rep, f)
            k2 = canonical_form(other)
            if k2 not in tree:
                tree[k2] = (other, k, f)
                nxt.append(k2)
    return sorted(nxt)


def apply_flips(T: Triangulation, path) -> Triangulation:
    for f in path:
        T = flip(T, f)
    return T


def random_walk(T: Triangulation, length: int, rng: random.Random) -> tuple[list[Triangulation], list[int]]:
    """Random flip walk; returns the visited triangulations and the flipped edges."""
    seq = [T]
    flips = []
    for _ in range(length):
        choices = seq[-1].flippable_edges()
        if not choices:
            break
        f = rng.choice(choices)
        flips.append(f)
        seq.append(flip(seq[-1], f))
    return seq, flips
