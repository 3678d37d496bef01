"""Command line entry point: ``prbg <subcommand> ...``.

Every subcommand exits 0 only when all of its checks pass.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io as pio
from .geom import FLOAT, MODES, RATIONAL
from .obg import OBG, STRUCTURE_LEMMAS, is_prbg, verify_structure


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _sizes(text: str) -> tuple[int, ...]:
    """'8..16' or '8,10,12' or '8..60:4'."""
    if ".." in text:
        rng, _, step = text.partition(":")
        lo, hi = rng.split("..")
        return tuple(range(int(lo), int(hi) + 1, int(step or 1)))
    return tuple(int(x) for x in text.split(","))


def cmd_gen(args) -> int:
    from .experiments import gen_random_convex, gen_regular_unit_polygon

    mode = args.mode or (FLOAT if args.kind == "regular" else RATIONAL)
    if args.kind == "regular":
        cps = gen_regular_unit_polygon(args.n, mode)
    else:
        cps = gen_random_convex(args.n, args.seed, mode)
    _emit(args, pio.dumps({"type": "points", "points": pio.points_to_json(cps.points)}))
    return 0


def _load_points(path):
    d = pio.read_json(path)
    if d.get("type") == "geograph":
        return pio.geograph_from_dict(d).points
    return pio.points_from_json(d["points"])


def cmd_build(args) -> int:
    from .proximity import build_gabriel, build_udg, greedy_maximal_lgg, is_valid_lgg

    pts = _load_points(args.points)
    if args.kind == "udg":
        g = build_udg(pts, tolerance=args.tolerance)
    elif args.kind == "gabriel":
        g = build_gabriel(pts)
    else:
        g = greedy_maximal_lgg(pts, seed=args.seed)
    _emit(args, pio.dumps(pio.geograph_to_dict(g)))
    return 0 if args.kind != "lgg" or is_valid_lgg(g) else 1


def cmd_decompose(args) -> int:
    from .decompose import decompose_full

    g = pio.load_graph(args.graph)
    d = decompose_full(g, pair=tuple(p - 1 for p in args.pair) if args.pair else "auto", check=False)
    doc = pio.decomposition_to_dict(d)
    ok = True
    for name, h in (("g1", d.g1), ("g2", d.g2)):
        res = is_prbg(h)
        doc[f"{name}_prbg"] = res.ok
        if not res:
            ok = False
            doc[f"{name}_witness"] = {"path": [str(x) for x in res.path], "back_edge": list(res.back_edge)}
    _emit(args, pio.dumps(doc))
    return 0 if ok else 1


def _verify_one(g, lemma: str) -> dict:
    if isinstance(g, OBG):
        graphs = [("graph", g)]
    else:
        from .decompose import decompose_full

        d = decompose_full(g, check=False)
        graphs = [("g1", d.g1), ("g2", d.g2)]
    out = {}
    for name, h in graphs:
        if lemma == "prbg":
            res = is_prbg(h)
            out[name] = {"passed": res.ok, "counterexample": None if res else [str(x) for x in res.path]}
        else:
            rep = verify_structure(h, lemma)
            out[name] = {"passed": rep.passed, "checks": rep.checks,
                         "counterexample": None if rep.passed else repr(rep.counterexample)}
    return out


def cmd_verify(args) -> int:
    files = sorted(Path(args.corpus).glob("*.json")) if args.corpus else [Path(args.graph)]
    instances, passes, bad = 0, 0, []
    for f in files:
        res = _verify_one(pio.load_graph(f), args.lemma)
        instances += 1
        if all(r["passed"] for r in res.values()):
            passes += 1
        else:
            bad.append({"file": f.name, "result": res})
    _emit(args, pio.dumps({"lemma": args.lemma, "instances": instances, "passes": passes, "counterexamples": bad}))
    return 0 if passes == instances else 1


def cmd_bound(args) -> int:
    from .bounds import dnc_edge_bound

    g = pio.load_graph(args.graph)
    cert = dnc_edge_bound(g)
    _emit(args, pio.dumps(cert.to_dict()))
    return 0 if cert.sound and cert.within_reference else 1


def cmd_maxsearch(args) -> int:
    from .bounds import exact_fixture_payload, max_prbg_edges_exact

    if args.table:
        _emit(args, pio.dumps(exact_fixture_payload(args.table)))
        return 0
    best, g = max_prbg_edges_exact(args.nu, args.nv)
    doc = {"nu": args.nu, "nv": args.nv, "max_edges": best, "witness": pio.obg_to_dict(g)}
    _emit(args, pio.dumps(doc))
    return 0


def cmd_genlb(args) -> int:
    import math

    from .bounds import gen_lower_bound_prbg

    g = gen_lower_bound_prbg(args.k)
    ok = bool(is_prbg(g))
    m = g.u_count
    doc = {"k": args.k, "per_side": m, "edges": len(g.edges), "prbg": ok,
           "density": len(g.edges) / (m * math.log2(m)) if m > 1 else None}
    if args.graph_out:
        pio.write_json(args.graph_out, pio.obg_to_dict(g))
    _emit(args, pio.dumps(doc))
    return 0 if ok else 1


def cmd_optimize(args) -> int:
    from .experiments import Schedule, optimize_unit_distances

    res = optimize_unit_distances(args.n, args.seed, Schedule(args.iterations),
                                  tolerance=args.tolerance if args.tolerance is not None else 1e-9)
    doc = {"n": args.n, "seed": args.seed, "count": res.count, "recheck_count": res.recheck_count,
           "target_2n_minus_7": res.target, "points": pio.points_to_json(res.best.points),
           "history_tail": res.history[-10:]}
    _emit(args, pio.dumps(doc))
    return 0


def cmd_suite(args) -> int:
    from .experiments import ExperimentSpec, run_suite

    spec = ExperimentSpec(args.name or args.generator, args.generator, _sizes(args.sizes), _sizes(args.seeds),
                          bundle_dir=args.bundles)
    res = run_suite(spec, workers=args.workers)
    _emit(args, res.csv_text())
    print(f"{len(res.rows)} rows, {res.failures} failures, {res.seconds:.1f}s", file=sys.stderr)
    return 0 if res.failures == 0 else 1


def cmd_export_svg(args) -> int:
    from .decompose import decompose_full
    from .svg import export_svg

    g = pio.load_graph(args.graph)
    obj = decompose_full(g, check=False) if args.decomposition else g
    _emit(args, export_svg(obj))
    return 0


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--mode", choices=MODES, default=d(None), help="coordinate arithmetic for generated points")
    p.add_argument("--tolerance", type=float, default=d(None), help="unit-distance tolerance on d^2 (float mode)")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--out", default=d(None), help="write the result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prbg", description=__doc__.splitlines()[0])
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    # the same flags are accepted after the subcommand; SUPPRESS keeps earlier values
    _global_flags(common, suppress=True)

    def add(name: str, **kw) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], **kw)

    s = add("gen", help="generate a convex point set")
    s.add_argument("--kind", choices=("regular", "random"), default="random")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_gen)

    s = add("build", help="build a proximity graph on a point file")
    s.add_argument("--kind", choices=("udg", "gabriel", "lgg"), default="lgg")
    s.add_argument("--points", required=True)
    s.set_defaults(func=cmd_build)

    s = add("decompose", help="split a convex graph into two ordered bipartite graphs")
    s.add_argument("--graph", required=True)
    s.add_argument("--pair", type=int, nargs=2, default=None, help="1-based antipodal pair")
    s.set_defaults(func=cmd_decompose)

    s = add("verify", help="check a property on one graph or a directory of graphs")
    s.add_argument("--lemma", choices=("prbg", *STRUCTURE_LEMMAS), default="prbg")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph")
    g.add_argument("--corpus")
    s.set_defaults(func=cmd_verify)

    s = add("bound", help="divide-and-conquer edge certificate for an ordered bipartite graph")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_bound)

    s = add("maxsearch", help="exact maximum edge count by branch and bound")
    s.add_argument("--nu", type=int, default=3)
    s.add_argument("--nv", type=int, default=3)
    s.add_argument("--table", type=int, default=None, help="solve every size up to this per side")
    s.set_defaults(func=cmd_maxsearch)

    s = add("genlb", help="dense doubling construction")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--graph-out", default=None)
    s.set_defaults(func=cmd_genlb)

    s = add("optimize", help="anneal a convex set for many unit distances")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--iterations", type=int, default=4000)
    s.set_defaults(func=cmd_optimize)

    from .experiments import GENERATORS

    s = add("suite", help="run the corpus pipeline and print CSV")
    s.add_argument("--generator", choices=GENERATORS, required=True)
    s.add_argument("--sizes", required=True, help="e.g. 8..16 or 8..60:4 or 8,12")
    s.add_argument("--seeds", default="1")
    s.add_argument("--name", default=None)
    s.add_argument("--bundles", default=None, help="directory for failure bundles")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_suite)

    s = add("export-svg", help="draw a graph or its decomposition")
    s.add_argument("--graph", required=True)
    s.add_argument("--decomposition", action="store_true")
    s.set_defaults(func=cmd_export_svg)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
