"""Named audit suites: each one replays a family of checks and records the outcome."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable

from . import __version__
from . import complexes as cx
from . import normalcurves as nc
from . import triangulation as tr
from .surface import SurfaceSig, maximal_simplex_range, small_complex_table, SmallComplexKind

PAPER, TRIVIAL, DERIVED = "PAPER", "TRIVIAL", "DERIVED"


@dataclass
class Check:
    name: str
    expected: str
    provenance: str
    observed: Any
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": self.expected, "provenance": self.provenance,
                "observed": self.observed, "pass": bool(self.passed)}


@dataclass
class AuditReport:
    suite: str
    anchor: str
    config: dict
    checks: list[Check] = field(default_factory=list)

    def add(self, name, expected, provenance, observed, passed) -> bool:
        self.checks.append(Check(name, expected, provenance, observed, bool(passed)))
        return bool(passed)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        passed = sum(c.passed for c in self.checks)
        return {"suite": self.suite, "anchor": self.anchor, "config": self.config,
                "version": __version__, "checks": [c.to_json() for c in self.checks],
                "summary": {"total": len(self.checks), "passed": passed,
                            "failed": len(self.checks) - passed}}


def _sig(config, default):
    return SurfaceSig.parse(config.get("surface") or default)


def suite_small_surfaces(config: dict) -> AuditReport:
    rep = AuditReport("small-surfaces", "curve complexes of low dimension; all circles on S0,3 trivial", config)
    table = [("S0,3", SmallComplexKind.EMPTY), ("S0,4", SmallComplexKind.INFINITE_DISCRETE),
             ("N1,1", SmallComplexKind.SINGLE_VERTEX), ("N1,0", SmallComplexKind.SINGLE_VERTEX),
             ("N1,2", SmallComplexKind.TWO_VERTICES), ("N1,3", SmallComplexKind.GENERIC)]
    for name, kind in table:
        got = small_complex_table(SurfaceSig.parse(name))
        rep.add(f"table {name}", kind.value, PAPER, got.value, got == kind)
    snap = cx.build_snapshot(SurfaceSig.parse("S0,3"), 10)
    rep.add("S0,3 W=10 vertices", "0", PAPER, len(snap), len(snap) == 0)
    snap = cx.build_snapshot(SurfaceSig.parse("N1,2"), 6)
    rep.add("N1,2 W=6 vertices", "2", PAPER, len(snap), len(snap) == 2)
    rep.add("N1,2 W=6 edges", "0", PAPER, len(snap.edges()), not snap.edges())
    s4 = cx.build_snapshot(SurfaceSig.parse("S0,4"), 4)
    s8 = cx.build_snapshot(SurfaceSig.parse("S0,4"), 8)
    rep.add("S0,4 growth W=4 -> W=8", "strictly increasing", PAPER, [len(s4), len(s8)], len(s4) < len(s8))
    rep.add("S0,4 edges", "0 at both bounds", PAPER, [len(s4.edges()), len(s8.edges())],
            not s4.edges() and not s8.edges())
    return rep


def suite_dims(config: dict) -> AuditReport:
    sig = _sig(config, "N1,4")
    bound = int(config.get("bound") or 4)
    rep = AuditReport("dims", "maximal simplices of C(S) and of punctured RP^2 have constant dimension", config)
    snap = cx.build_snapshot(sig, bound)
    audits = cx.maximal_simplices(snap)
    hi = maximal_simplex_range(sig).hi
    dims = sorted({a.dimension for a in audits})
    rep.add("no clique above the top dimension", f"<= {hi}", PAPER, dims, all(d <= hi for d in dims))
    rep.add("top dimension attained", f"{hi}", PAPER, max(dims, default=None), hi in dims)
    return rep


def suite_eq1(config: dict) -> AuditReport:
    sig = _sig(config, "N3,1")
    bound = int(config.get("bound") or 3)
    rep = AuditReport("eq1", "3k = n + m + 2(l + 1 - m) with a_r <= l <= b_r", config)
    snap = cx.build_snapshot(sig, bound)
    rng = maximal_simplex_range(sig)
    certified = [a for a in cx.maximal_simplices(snap) if a.certified]
    dims = sorted({a.dimension for a in certified})
    rep.add("certified dimensions within range", f"subset of [{rng.lo}, {rng.hi}]", PAPER, dims,
            all(d in rng for d in dims))
    rep.add("both range ends witnessed", f"{rng.lo} and {rng.hi}", PAPER, dims,
            rng.lo in dims and rng.hi in dims)
    for a in certified:
        parity_ok = sig.orientable or a.onesided % 2 == sig.genus % 2
        rep.add(f"clique {list(a.clique)}", "3k = n + m + 2(l + 1 - m), m has the parity of g", PAPER,
                {"dimension": a.dimension, "m": a.onesided}, bool(a.eq1_ok) and parity_ok)
    return rep


def suite_duallink(config: dict) -> AuditReport:
    sig = _sig(config, "N1,4")
    bound = int(config.get("bound") or 4)
    rep = AuditReport("duallink", "dual link connected iff one-sided or 2-separating; two components otherwise",
                      config)
    snap = cx.build_snapshot(sig, bound)
    for i, v in enumerate(snap.vertices):
        if v.one_sided or v.is_k_separating(2):
            view = cx.link(snap, i)
            rep.add(f"vertex {i} ({v.label()}) dual link connected", "connected (bounded evidence)", PAPER,
                    len(view.components), view.connected)
        elif v.separating and v.k_separating is not None and v.k_separating >= 3:
            try:
                sides = cx.side_partition(snap, i)
                counts = [sum(1 for s in sides.values() if s == p) for p in range(len(v.pieces))]
                ok = all(counts)
            except AssertionError as exc:
                counts, ok = str(exc), False
            rep.add(f"vertex {i} ({v.label()}) side partition", "both sides nonempty, no crossing dual edge",
                    PAPER, counts, ok)
    return rep


def suite_pentagon(config: dict) -> AuditReport:
    sig = _sig(config, "N1,5")
    start = int(config.get("bound") or 3)
    rep = AuditReport("pentagon", "simple pairs detected by pentagons and codimension-zero simplices", config)
    witness, snap = None, None
    for bound in range(start, 6):
        snap = cx.build_snapshot(sig, bound, lazy=True)
        T = snap.triangulation
        chain = cx.reference_chain(T, 3)
        alpha, beta = cx.arc_vertex(snap, chain[0]), cx.arc_vertex(snap, chain[1])
        if alpha is None or beta is None:
            continue
        witness = cx.find_simple_pair_witness(snap, alpha, beta)
        if witness is not None:
            break
    found = witness is not None
    rep.add("witness for a simple pair", "found", DERIVED,
            {"bound": snap.bound, "witness": witness.to_json() if found else None}, found)
    if found:
        cond = cx.check_simple_pair_witness(snap, alpha, beta, witness)
        rep.add("witness re-validates", "conditions (i)-(iii)", PAPER, cond, all(cond.values()))
        gamma = cx.arc_vertex(snap, chain[2])
        if gamma is not None:
            miss = cx.find_simple_pair_witness(snap, alpha, gamma)
            rep.add("arcs without common endpoint", f"not found at W={snap.bound}", DERIVED,
                    None if miss is None else miss.to_json(), miss is None)
    return rep


def suite_flips(config: dict) -> AuditReport:
    sig = _sig(config, "N1,3")
    walks = int(config.get("walks") or 100)
    length = int(config.get("len") or 8)
    seed = int(config.get("seed") or 0)
    rep = AuditReport("flips", "consecutive ideal triangulations share a codimension-one simplex", config)
    rng = random.Random(seed)
    T = tr.build_reference(sig)
    found = structural = 0
    for _ in range(walks):
        seq, flips = tr.random_walk(T, rng.randint(1, length), rng)
        ok = all(tr.validate(x).surface == sig for x in seq)
        ok = ok and all(tr.shared_edge_count(x, f) == x.num_edges - 1 for x, f in zip(seq, flips))
        structural += ok
        path = tr.flip_path(seq[-1], T, length)
        if path is not None and len(path) <= length and \
                tr.canonical_form(tr.apply_flips(seq[-1], path)) == tr.canonical_form(T):
            found += 1
    rep.add("return paths found", f"{walks}/{walks}", TRIVIAL, f"{found}/{walks}", found == walks)
    rep.add("walks keep the surface and share e-1 edges", f"{walks}/{walks}", TRIVIAL,
            f"{structural}/{walks}", structural == walks)
    return rep


def suite_transport(config: dict) -> AuditReport:
    sig = _sig(config, "N1,3")
    samples = int(config.get("samples") or 1000)
    seed = int(config.get("seed") or 0)
    bound = int(config.get("bound") or 4)
    rep = AuditReport("transport", "curve type is invariant under flips", config)
    rng = random.Random(seed)
    T = tr.build_reference(sig)
    curves = nc.enumerate_vertices(T, bound)
    edges = nc.transportable_edges(T)
    same = back = 0
    for _ in range(samples):
        c = rng.choice(curves)
        e = rng.choice(edges)
        w2 = nc.transport_flip(T, c.weights, e)
        T2 = tr.flip(T, e)
        cl = nc.classify(T2, w2)
        same += cl.curve is not None and cl.curve.shape() == c.shape()
        back += nc.transport_flip(T2, w2, e) == c.weights
    rep.add("kind invariant", f"{samples}/{samples}", DERIVED, f"{same}/{samples}", same == samples)
    rep.add("round trip identity", f"{samples}/{samples}", TRIVIAL, f"{back}/{samples}", back == samples)
    return rep


SUITES: dict[str, Callable[[dict], AuditReport]] = {
    "small-surfaces": suite_small_surfaces,
    "dims": suite_dims,
    "eq1": suite_eq1,
    "duallink": suite_duallink,
    "pentagon": suite_pentagon,
    "flips": suite_flips,
    "transport": suite_transport,
}


def audit_suites() -> list[str]:
    return list(SUITES)


def run_suite(name: str, config: dict) -> AuditReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return fn(config)
