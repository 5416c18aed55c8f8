"""``curvecx`` command line.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
errors.  Output is JSON (sorted keys) on stdout or in ``--out``; random
choices use Python's Mersenne Twister seeded from ``--seed``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys

from . import __version__
from . import complexes as cx
from . import normalcurves as nc
from . import triangulation as tr
from .audit import audit_suites, run_suite
from .surface import HypothesisError, SurfaceSig, surface_info


class UsageError(Exception):
    pass


def _weights(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad weight list {text!r}") from None


def _emit(payload, args):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _surface(args, default=None):
    text = args.surface or default
    if text is None:
        raise UsageError("--surface is required")
    try:
        return SurfaceSig.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _triangulation(args):
    if getattr(args, "file", None):
        with open(args.file, encoding="utf-8") as fh:
            return tr.Triangulation.from_json(json.load(fh))
    return tr.build_reference(_surface(args))


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out") and v is not None}


def cmd_surface_info(args):
    _emit(surface_info(_surface(args)), args)
    return 0


def cmd_tri(args):
    T = _triangulation(args)
    if args.action == "build":
        payload = T.to_json()
    elif args.action == "validate":
        try:
            payload = {"valid": True, **tr.validate(T).to_json()}
        except tr.InvalidTriangulation as exc:
            _emit({"valid": False, "problems": exc.problems}, args)
            return 1
    elif args.action == "flip":
        if args.edge is None:
            raise UsageError("tri flip needs --edge")
        payload = tr.flip(T, args.edge).to_json()
    elif args.action == "bfs":
        payload = tr.flip_bfs(T, args.radius).to_json()
    else:
        rng = random.Random(args.seed)
        seq, flips = tr.random_walk(T, args.len, rng)
        path = tr.flip_path(seq[-1], T, args.max_depth)
        payload = {"walk": flips, "return_path": path, "found": path is not None}
        _emit(payload, args)
        return 0 if path is not None else 1
    _emit(payload, args)
    return 0


def cmd_curves(args):
    T = _triangulation(args)
    tid = nc.triangulation_id(T)
    if args.action == "enumerate":
        curves = nc.enumerate_vertices(T, args.bound)
        if args.csv:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["vector", "kind", "k", "pieces"])
            for c in curves:
                writer.writerow([" ".join(map(str, c.weights)), c.kind,
                                 "" if c.k_separating is None else c.k_separating,
                                 ";".join(p.summary() for p in c.pieces)])
            with open(args.csv, "w", encoding="utf-8") as fh:
                fh.write(buf.getvalue())
        _emit({"triangulation": tid, "bound": args.bound, "count": len(curves),
               "curves": [c.to_json() for c in curves]}, args)
        return 0
    if args.weights is None:
        raise UsageError(f"curves {args.action} needs --weights")
    w = _weights(args.weights)
    if len(w) != T.num_edges:
        raise UsageError(f"expected {T.num_edges} weights")
    if args.action == "classify":
        cl = nc.classify(T, w)
        payload = {"triangulation": tid, "weights": list(w), "verdict": cl.verdict,
                   "curve": cl.curve.to_json() if cl.curve else None}
    elif args.action == "cut":
        payload = {"triangulation": tid, "weights": list(w),
                   "pieces": [p.to_json() for p in nc.cut_along(T, w)]}
    elif args.action == "disjoint":
        if args.weights2 is None:
            raise UsageError("curves disjoint needs --weights2")
        payload = {"triangulation": tid, "disjoint": nc.disjoint(T, w, _weights(args.weights2))}
    else:
        if args.edge is None:
            raise UsageError("curves transport needs --edge")
        T2 = tr.flip(T, args.edge)
        payload = {"triangulation": nc.triangulation_id(T2),
                   "weights": list(nc.transport_flip(T, w, args.edge))}
    _emit(payload, args)
    return 0


def cmd_complex(args):
    sig = _surface(args)
    T = tr.build_reference(sig)
    if args.action == "chain":
        arcs = list(_weights(args.arcs)) if args.arcs else cx.reference_chain(T, 2)
        _emit({"arcs": arcs, "chain": cx.is_chain(T, arcs)}, args)
        return 0
    if args.action == "good-triangles":
        _emit({"good_triangles": cx.good_triangles(T)}, args)
        return 0
    lazy = args.action in ("simple-pair", "pentagon", "duallink")
    snap = cx.build_snapshot(sig, args.bound, lazy=lazy)
    if args.action == "build":
        payload = snap.to_json()
    elif args.action == "cliques":
        payload = {"surface": str(sig), "bound": args.bound,
                   "cliques": [a.to_json() for a in cx.maximal_simplices(snap)]}
    elif args.action == "duallink":
        if args.vertex is None:
            raise UsageError("complex duallink needs --vertex")
        payload = cx.link(snap, args.vertex).to_json()
        payload["connected"] = len(payload["components"]) <= 1
    elif args.action == "pentagon":
        if args.ids is None:
            raise UsageError("complex pentagon needs --ids")
        payload = {"ids": list(_weights(args.ids)), "pentagon": cx.is_pentagon(snap, _weights(args.ids))}
    else:
        arcs = list(_weights(args.arcs)) if args.arcs else cx.reference_chain(T, 2)
        alpha, beta = cx.arc_vertex(snap, arcs[0]), cx.arc_vertex(snap, arcs[1])
        if alpha is None or beta is None:
            _emit({"arcs": arcs, "found": False, "bound": args.bound,
                   "reason": "arc curves not in the snapshot"}, args)
            return 1
        w = cx.find_simple_pair_witness(snap, alpha, beta)
        payload = {"arcs": arcs, "alpha": alpha, "beta": beta, "bound": args.bound,
                   "found": w is not None, "witness": w.to_json() if w else None}
        if w is not None:
            payload["conditions"] = cx.check_simple_pair_witness(snap, alpha, beta, w)
    _emit(payload, args)
    return 0


def cmd_audit(args):
    report = run_suite(args.suite, _config(args))
    _emit(report.to_json(), args)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvecx", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"curvecx {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, bound=None):
        sp.add_argument("--surface", help="surface shorthand, e.g. N3,1 or S0,4")
        sp.add_argument("--out", help="write JSON here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--bound", type=int, default=bound)

    sp = sub.add_parser("surface-info", help="closed-form surface data")
    common(sp)
    sp.set_defaults(func=cmd_surface_info)

    sp = sub.add_parser("tri", help="ideal triangulations")
    sp.add_argument("action", choices=["build", "validate", "flip", "bfs", "path"])
    common(sp)
    sp.add_argument("--file", help="triangulation JSON (default: reference for --surface)")
    sp.add_argument("--edge", type=int)
    sp.add_argument("--radius", type=int, default=2)
    sp.add_argument("--max-depth", type=int, default=8)
    sp.add_argument("--len", type=int, default=8)
    sp.set_defaults(func=cmd_tri)

    sp = sub.add_parser("curves", help="normal curves")
    sp.add_argument("action", choices=["enumerate", "classify", "disjoint", "cut", "transport"])
    common(sp, bound=4)
    sp.add_argument("--file")
    sp.add_argument("--weights")
    sp.add_argument("--weights2")
    sp.add_argument("--edge", type=int)
    sp.add_argument("--csv", help="also write the enumeration as CSV")
    sp.set_defaults(func=cmd_curves)

    sp = sub.add_parser("complex", help="bounded curve complex snapshots")
    sp.add_argument("action", choices=["build", "cliques", "duallink", "pentagon", "simple-pair",
                                       "chain", "good-triangles"])
    common(sp, bound=3)
    sp.add_argument("--vertex", type=int)
    sp.add_argument("--ids")
    sp.add_argument("--arcs", help="comma separated edge indices")
    sp.set_defaults(func=cmd_complex)

    sp = sub.add_parser("audit", help="run a named audit suite")
    sp.add_argument("--suite", required=True, choices=audit_suites())
    common(sp)
    sp.add_argument("--walks", type=int)
    sp.add_argument("--len", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--max-depth", type=int)
    sp.add_argument("--radius", type=int)
    sp.set_defaults(func=cmd_audit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"curvecx: error: {exc}", file=sys.stderr)
        return 2
    except (HypothesisError, tr.InvalidTriangulation, tr.UnflippableEdge, nc.Untransportable,
            nc.NotConnected, nc.SameClass, ValueError, KeyError) as exc:
        print(f"curvecx: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
