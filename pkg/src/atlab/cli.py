"""Command-line front end.

    atlab gen FAMILY SIZE... [--weights KIND | --x P/Q --y P/Q | --J F --U F] [--out FILE]
    atlab compute --graph FILE --spec FILE [--mode spin|current|both]
    atlab verify SUITE [--seed N] [--out FILE] [--workers N] [--timings]
    atlab check simon|gaussian|totpos --graph FILE ...

Exit codes: 0 when everything holds, 1 when an identity or inequality
fails, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__, families, sampling
from .errors import AtlabError
from .graph import DualPathRegistry, PlanarGraph
from .io import dump_json, graph_to_json, load_graph, spec_from_json
from .model import Couplings, EdgeWeights, couplings_to_weights

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# -- gen ---------------------------------------------------------------------------


def _generate(family: str, sizes: list):
    def need(k):
        if len(sizes) != k:
            raise InputError(f"family {family!r} takes {k} size argument(s)")

    if family == "path":
        need(1)
        return families.path(sizes[0])
    if family == "cycle":
        need(1)
        return families.cycle(sizes[0])
    if family == "grid":
        need(2)
        return families.grid(sizes[0], sizes[1])
    if family == "complete":
        need(1)
        return families.complete(sizes[0])
    if family == "theta":
        need(0)
        return families.theta()
    if family == "chord":
        need(0)
        return families.cycle_with_chord()
    raise InputError(f"unknown family {family!r}")


def cmd_gen(args) -> int:
    g = _generate(args.family, args.sizes)
    w = None
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise InputError("--x and --y go together")
        w = EdgeWeights.uniform(g.m, args.x, args.y)
    elif args.J is not None or args.U is not None:
        if args.J is None or args.U is None:
            raise InputError("--J and --U go together")
        w = couplings_to_weights(Couplings((args.J,) * g.m, (args.U,) * g.m))
    elif args.weights:
        w = sampling.SAMPLERS[args.weights](g.m, random.Random(args.seed))
    desc = graph_to_json(g, w)
    if w is not None and not w.is_exact:
        for e in desc["edges"]:
            e.pop("x", None)
            e.pop("y", None)
            e["J"], e["U"] = args.J, args.U
    if not isinstance(g, PlanarGraph):
        print(f"note: {g.name} has no plane embedding; only non-planar suites apply", file=sys.stderr)
    text = dump_json(desc, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK


# -- compute -------------------------------------------------------------------------


def cmd_compute(args) -> int:
    from .currents import current_oracle
    from .model import spin_oracle

    g, w = load_graph(args.graph)
    if w is None:
        raise InputError("the graph file carries no weights")
    with open(args.spec) as fh:
        spec = spec_from_json(json.load(fh))
    reg = DualPathRegistry(g) if isinstance(g, PlanarGraph) else None
    out = {"spec": json.load(open(args.spec))}
    vals = []
    if args.mode in ("spin", "both"):
        v = spin_oracle(g, w, spec, reg, workers=args.workers)
        out["spin"] = str(v)
        vals.append(v)
    if args.mode in ("current", "both"):
        v = current_oracle(g, w, spec, reg, method=args.method, workers=args.workers)
        out["current"] = str(v)
        vals.append(v)
    code = EXIT_OK
    if len(vals) == 2:
        out["equal"] = vals[0] == vals[1] if w.is_exact else abs(vals[0] - vals[1]) <= 1e-9 * max(1, abs(vals[0]))
        code = EXIT_OK if out["equal"] else EXIT_FAIL
    sys.stdout.write(dump_json(out))
    return code


# -- verify --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    from .suites import SUITES, SuiteConfig, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}")
    fam = tuple(args.family.split(",")) if args.family else families.DEFAULT_FAMILY
    for name in fam:
        families.by_name(name)
    cfg = SuiteConfig(seed=args.seed, workers=args.workers, family=fam, samples=args.samples,
                      timings=args.timings)
    report = run_suite(args.suite, cfg)
    text = dump_json(report, args.out)
    s = report["summary"]
    line = f"{args.suite}: {s['passed']}/{s['records']} records passed ({s['cases']} cases)"
    if args.out is None:
        sys.stdout.write(text)
        print(line, file=sys.stderr)
    else:
        print(line)
    return EXIT_OK if s["all_passed"] else EXIT_FAIL


# -- check ---------------------------------------------------------------------------


def _vertex(g, token):
    for v in g.vertices:
        if str(v) == str(token):
            return v
    raise InputError(f"unknown vertex {token!r}")


def cmd_check(args) -> int:
    from .inequalities import check_gaussian, check_simon
    from .model import SpinEnumerator
    from .pfaffian import total_positivity_scan

    g, w = load_graph(args.graph)
    if w is None:
        raise InputError("the graph file carries no weights")
    e = SpinEnumerator(g, w)
    if args.what == "simon":
        if args.u is None or args.v is None or not args.W:
            raise InputError("simon needs --u, --v and --W")
        r = check_simon(g, w, _vertex(g, args.u), _vertex(g, args.v), [_vertex(g, x) for x in args.W], enum=e)
        out = {"check": "simon", "lhs": str(r.lhs), "rhs": str(r.rhs), "holds": r.holds}
        ok = r.holds
    elif args.what == "gaussian":
        if not args.S:
            raise InputError("gaussian needs --S")
        r = check_gaussian(g, w, [_vertex(g, x) for x in args.S], enum=e)
        out = {"check": "gaussian", "lhs": str(r.lhs), "rhs": str(r.rhs), "holds": r.holds}
        ok = r.holds
    else:
        if not args.sources or not args.sinks or len(args.sources) != len(args.sinks):
            raise InputError("totpos needs --sources and --sinks of equal length")
        src = [_vertex(g, x) for x in args.sources]
        snk = [_vertex(g, x) for x in args.sinks]
        M = [[e.correlation({s, t}) for t in snk] for s in src]
        rep = total_positivity_scan(M, g, src, snk)
        out = {
            "check": "totpos",
            "matrix": [[str(v) for v in row] for row in M],
            "minors": [{"rows": list(m.rows), "cols": list(m.cols), "det": str(m.det), "paths": m.paths}
                       for m in rep.minors],
            "nonnegative": rep.nonnegative,
            "positivity_matches_paths": rep.positivity_matches_paths,
        }
        ok = rep.holds
    sys.stdout.write(dump_json(out))
    return EXIT_OK if ok else EXIT_FAIL


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="atlab", description="Exact Ashkin-Teller correlation workbench.")
    p.add_argument("--version", action="version", version=f"atlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a graph file")
    g.add_argument("family", choices=["path", "cycle", "grid", "complete", "theta", "chord"])
    g.add_argument("sizes", nargs="*", type=int)
    g.add_argument("--x")
    g.add_argument("--y")
    g.add_argument("--J", type=float)
    g.add_argument("--U", type=float)
    g.add_argument("--weights", choices=sorted(sampling.SAMPLERS))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("compute", help="evaluate a correlator")
    c.add_argument("--graph", required=True)
    c.add_argument("--spec", required=True)
    c.add_argument("--mode", choices=["spin", "current", "both"], default="both")
    c.add_argument("--method", choices=["kernel", "direct"], default="kernel")
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--samples", type=int, default=0, help="weight samples per graph (0: suite default)")
    v.add_argument("--family", help="comma-separated graph names")
    v.add_argument("--timings", action="store_true", help="include runtimes (reports stop being byte-identical)")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("check", help="check one inequality or a total positivity scan")
    k.add_argument("what", choices=["simon", "gaussian", "totpos"])
    k.add_argument("--graph", required=True)
    k.add_argument("--u")
    k.add_argument("--v")
    k.add_argument("--W", nargs="+")
    k.add_argument("--S", nargs="+")
    k.add_argument("--sources", nargs="+")
    k.add_argument("--sinks", nargs="+")
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, AtlabError, OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
