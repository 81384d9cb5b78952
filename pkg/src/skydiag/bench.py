"""Benchmark harness: timed diagram builds and lookup-vs-recompute query speed."""
from __future__ import annotations

import csv
import itertools
import math
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from .approx import ALGOS as APPROX_ALGOS, approximate
from .core import quadrant_skyline
from .data import GenConfig, generate
from .dynamic import BACKENDS as DYNAMIC_ALGOS, dynamic_partition
from .grid import DiagramPartition, build_cell_grid, merge_equal_results
from .quadrant import qscan, quadrant_partition

QUADRANT_ALGOS = ("qbase", "qgraph", "qscan", "qsweep")
ALL_ALGOS = QUADRANT_ALGOS + tuple(DYNAMIC_ALGOS) + tuple(APPROX_ALGOS)
CSV_COLUMNS = ("algo", "n", "d", "s", "delta", "ms", "cells", "classes", "bytes")


@dataclass
class BenchRecord:
    algo: str
    n: int
    d: int
    s: int
    delta: float | None
    ms: float
    cells: int
    classes: int
    bytes: int


@dataclass
class BenchSuite:
    algos: tuple = ("qscan",)
    ns: tuple = (200,)
    ds: tuple = (2,)
    ss: tuple = (1000,)
    deltas: tuple = (None,)
    distribution: str = "inde"
    distinct: bool = False
    seed: int = 0
    threads: int = 1


def _result_bytes(part: DiagramPartition) -> int:
    # one 8-byte id per stored result entry, one result per class
    return 8 * sum(len(r) for r in part.results)


def run_one(algo: str, dataset, delta=None, threads: int = 1) -> tuple[float, int, int, int]:
    """Build once; return (ms, cells, classes, bytes)."""
    t0 = time.perf_counter()
    if algo in QUADRANT_ALGOS:
        part = quadrant_partition(dataset, algo)
        ms = (time.perf_counter() - t0) * 1e3
        return ms, part.grid.n_cells, part.n_classes, _result_bytes(part)
    if algo in DYNAMIC_ALGOS:
        part = dynamic_partition(dataset, algo, threads=threads)
        ms = (time.perf_counter() - t0) * 1e3
        return ms, part.grid.n_cells, part.n_classes, _result_bytes(part)
    if algo in APPROX_ALGOS:
        grid = build_cell_grid(dataset)
        results = qscan(dataset, grid)
        t0 = time.perf_counter()  # time the tiling only
        approx = approximate(results, math.inf if delta is None else delta, algo)
        ms = (time.perf_counter() - t0) * 1e3
        stored = sum(len(u) for u in approx.tiles.values())
        return ms, grid.n_cells, approx.n_tiles, 8 * stored
    raise ValueError(f"unknown algorithm {algo!r}")


def bench(suite: BenchSuite, log=sys.stderr) -> list[BenchRecord]:
    records = []
    for n, d, s in itertools.product(suite.ns, suite.ds, suite.ss):
        dataset = generate(GenConfig(suite.distribution, n, d, s, suite.distinct, suite.seed))
        for algo in suite.algos:
            deltas = suite.deltas if algo in APPROX_ALGOS else (None,)
            for delta in deltas:
                try:
                    ms, cells, classes, nbytes = run_one(algo, dataset, delta, suite.threads)
                except Exception as exc:  # recorded, the suite goes on
                    print(f"{algo} n={n} d={d} s={s} delta={delta}: {exc}", file=log)
                    ms, cells, classes, nbytes = math.nan, -1, -1, -1
                records.append(BenchRecord(algo, n, d, s, delta, ms, cells, classes, nbytes))
    return records


def write_csv(records, path_or_file) -> None:
    own = isinstance(path_or_file, str) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in records:
            row = asdict(r)
            row["delta"] = "" if r.delta is None else r.delta
            row["ms"] = f"{r.ms:.3f}"
            w.writerow([row[c] for c in CSV_COLUMNS])
    finally:
        if own:
            fh.close()


@dataclass
class QuerySpeed:
    n: int
    s: int
    queries: int
    build_s: float
    lookup_s: float
    scratch_s: float
    mismatches: int = 0

    @property
    def ratio(self) -> float:
        return self.scratch_s / self.lookup_s if self.lookup_s > 0 else math.inf


def query_speed(n: int = 100_000, s: int = 200, queries: int = 1000, seed: int = 0) -> QuerySpeed:
    """Time diagram lookups against from-scratch quadrant skylines on the same queries."""
    dataset = generate(GenConfig("inde", n, 2, s, seed=seed))
    t0 = time.perf_counter()
    grid = build_cell_grid(dataset)
    part = merge_equal_results(grid, qscan(dataset, grid), "quadrant", dataset)
    build_s = time.perf_counter() - t0
    rng = np.random.default_rng(seed + 1)
    # odd scaled coordinates never sit on a grid line
    qs = [tuple(int(v) for v in row) for row in 2 * rng.integers(0, 2 * s, (queries, 2)) + 1]

    t0 = time.perf_counter()
    looked = [part.lookup(q, scaled=True) for q in qs]
    lookup_s = time.perf_counter() - t0

    scaled = (dataset.coords * grid.scale, np.arange(n))
    t0 = time.perf_counter()
    fresh = [quadrant_skyline(scaled, q) for q in qs]
    scratch_s = time.perf_counter() - t0
    bad = sum(a != b for a, b in zip(looked, fresh))
    return QuerySpeed(n, s, queries, build_s, lookup_s, scratch_s, bad)
