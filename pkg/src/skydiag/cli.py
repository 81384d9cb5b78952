"""Command line: gen | build | query | approx | bench.

Exit status 0 on success, 1 on usage errors, 2 on data or schema errors.
Results go to stdout, one JSON value per line; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .approx import ALGOS as APPROX_ALGOS, ApproxDiagram, InfeasibleError, approximate
from .bench import ALL_ALGOS, BenchSuite, bench, query_speed, write_csv
from .core import DimensionError, SkydiagError
from .data import DISTRIBUTIONS, GenConfig, generate, load_dataset_csv, save_csv
from .dynamic import dynamic_partition
from .grid import DiagramPartition
from .quadrant import global_partition, quadrant_partition
from .serialize import load_diagram, save_diagram

ALGOS_BY_TYPE = {
    "quadrant": ("qbase", "qgraph", "qscan", "qsweep"),
    "global": ("qbase", "qgraph", "qscan"),
    "dynamic": ("dbase", "dsubset", "dscan"),
}
DEFAULT_ALGO = {"quadrant": "qscan", "global": "qscan", "dynamic": "dscan"}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _seed(args) -> int:
    env = os.environ.get("SKYDIAG_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SKYDIAG_SEED must be an integer, got {env!r}") from None
    return args.seed


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers: {text!r}") from None


def _delta(text: str) -> float:
    if text.lower() in ("inf", "infinity", "none"):
        return math.inf
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--delta must be an integer or 'inf', got {text!r}") from None


def _point(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--point must be comma-separated numbers: {text!r}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_gen(args):
    cfg = GenConfig(args.dist, args.n, args.d, args.s, args.distinct, _seed(args))
    ds = generate(cfg)
    save_csv(ds, args.out if args.out else sys.stdout)


def cmd_build(args):
    allowed = ALGOS_BY_TYPE[args.type]
    algo = args.algo or DEFAULT_ALGO[args.type]
    if algo not in allowed:
        raise DataError(f"unknown algorithm {algo!r} for --type {args.type}; choose from {', '.join(allowed)}")
    ds = load_dataset_csv(args.inp)
    if args.type == "quadrant":
        part = quadrant_partition(ds, algo)
    elif args.type == "global":
        part = global_partition(ds, algo)
    else:
        part = dynamic_partition(ds, algo, threads=args.threads)
    save_diagram(part, args.out)
    print(json.dumps({"kind": part.kind, "cells": part.grid.n_cells, "classes": part.n_classes,
                      "pieces": part.n_pieces}))


def _scaled_query(point, scale) -> tuple[int, ...]:
    # floor keeps non-integer queries on the correct side of every (integer) line
    return tuple(math.floor(v * scale) for v in point)


def cmd_query(args):
    diagram = load_diagram(args.diagram)
    if isinstance(diagram, ApproxDiagram) and diagram.grid is None:
        raise DataError("approximate diagram has no grid to query")
    d = diagram.grid.d
    points = [_point(p) for p in args.point or []]
    for p in points:
        if len(p) != d:
            raise UsageError(f"--point {','.join(map(str, p))} has {len(p)} coordinates, diagram is {d}-d")
    if args.points:
        for lineno, line in enumerate(open(args.points), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                p = [float(v) for v in line.split(",")]
            except ValueError:
                raise DataError(f"{args.points}:{lineno}: not numeric") from None
            if len(p) != d:
                raise DataError(f"{args.points}:{lineno}: {len(p)} coordinates, diagram is {d}-d")
            points.append(p)
    if not points:
        raise UsageError("give at least one --point or --points file")
    for p in points:
        res = diagram.lookup(_scaled_query(p, diagram.grid.scale), scaled=True)
        print(json.dumps(list(res)))


def cmd_approx(args):
    if args.algo not in APPROX_ALGOS:
        raise DataError(f"unknown algorithm {args.algo!r}; choose from {', '.join(APPROX_ALGOS)}")
    delta = _delta(args.delta)
    diagram = load_diagram(args.diagram)
    if not isinstance(diagram, DiagramPartition):
        raise DataError("approx needs an exact diagram as input")
    if diagram.grid.d != 2:
        raise DimensionError("approximate diagrams need a two-dimensional diagram")
    approx = approximate(diagram.cell_results(), delta, args.algo, kind=diagram.kind,
                         grid=diagram.grid, dataset=diagram.dataset)
    save_diagram(approx, args.out)
    print(json.dumps({"tiles": approx.n_tiles, "vpls": len(approx.vpls), "hpls": len(approx.hpls)}))


def cmd_bench(args):
    algos = tuple(a for a in args.algos.split(",") if a)
    unknown = [a for a in algos if a not in ALL_ALGOS]
    if unknown:
        raise DataError(f"unknown algorithm(s) {', '.join(unknown)}")
    suite = BenchSuite(
        algos=algos,
        ns=tuple(_int_list(args.n, "--n")),
        ds=tuple(_int_list(args.d, "--d")),
        ss=tuple(_int_list(args.s, "--s")),
        deltas=tuple(_delta(v) for v in args.delta.split(",")) if args.delta else (None,),
        distribution=args.dist,
        distinct=args.distinct,
        seed=_seed(args),
        threads=args.threads,
    )
    records = bench(suite)
    write_csv(records, args.out if args.out else sys.stdout)
    if args.query_speed:
        qs = query_speed(args.query_speed, args.query_s, seed=suite.seed)
        print(json.dumps({"n": qs.n, "s": qs.s, "queries": qs.queries, "lookup_s": qs.lookup_s,
                          "scratch_s": qs.scratch_s, "ratio": qs.ratio, "mismatches": qs.mismatches}),
              file=sys.stderr)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skydiag", description="Skyline diagrams for quadrant, global and dynamic skylines.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)

    g = sub.add_parser("gen", help="generate a synthetic dataset CSV")
    g.add_argument("--dist", choices=DISTRIBUTIONS, default="inde")
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--s", type=int, default=1000)
    g.add_argument("--distinct", action="store_true")
    g.add_argument("--out")
    common(g)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build an exact diagram")
    b.add_argument("--type", choices=tuple(ALGOS_BY_TYPE), default="quadrant")
    b.add_argument("--algo")
    b.add_argument("--in", dest="inp", required=True)
    b.add_argument("--out", required=True)
    common(b)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="look up skylines in a diagram")
    q.add_argument("--diagram", required=True)
    q.add_argument("--point", action="append", help="comma-separated coordinates; repeatable")
    q.add_argument("--points", help="file with one comma-separated point per line")
    common(q)
    q.set_defaults(func=cmd_query)

    a = sub.add_parser("approx", help="approximate an exact 2-d diagram")
    a.add_argument("--diagram", required=True)
    a.add_argument("--algo", default="bum")
    a.add_argument("--delta", required=True)
    a.add_argument("--out", required=True)
    common(a)
    a.set_defaults(func=cmd_approx)

    r = sub.add_parser("bench", help="time diagram construction")
    r.add_argument("--algos", default="qscan")
    r.add_argument("--n", default="200")
    r.add_argument("--d", default="2")
    r.add_argument("--s", default="1000")
    r.add_argument("--delta", default="")
    r.add_argument("--dist", choices=DISTRIBUTIONS, default="inde")
    r.add_argument("--distinct", action="store_true")
    r.add_argument("--query-speed", type=int, default=0, metavar="N",
                   help="also time 1000 lookups against recomputation on N points")
    r.add_argument("--query-s", type=int, default=200)
    r.add_argument("--out")
    common(r)
    r.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"skydiag: error: {exc}", file=sys.stderr)
        return 1
    except (DataError, SkydiagError, InfeasibleError, ValueError, OSError) as exc:
        print(f"skydiag: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
