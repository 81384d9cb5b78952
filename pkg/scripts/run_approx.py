"""Precision and space cost of BUM / TDP as delta varies, on quadrant grids.

    python3 scripts/run_approx.py --n 200 --deltas 5,10,20,50,100
"""
import argparse
import csv
import math
import sys
import time

from skydiag.approx import InfeasibleError, bum, precision, space_cost, tdp
from skydiag.data import GenConfig, generate
from skydiag.grid import build_cell_grid, merge_equal_results
from skydiag.quadrant import qscan


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--s", type=int, default=1000)
    ap.add_argument("--dist", default="inde", choices=("inde", "corr", "anti"))
    ap.add_argument("--deltas", default="5,10,20,50,100,inf")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    ds = generate(GenConfig(args.dist, args.n, 2, args.s, seed=args.seed))
    grid = build_cell_grid(ds)
    results = qscan(ds, grid)
    exact_cost = space_cost(merge_equal_results(grid, results, "quadrant", ds))

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh)
    w.writerow(["algo", "delta", "ms", "tiles", "precision", "space", "exact_space"])
    for text in args.deltas.split(","):
        delta = math.inf if text == "inf" else int(text)
        for name, algo in (("bum", bum), ("tdp", tdp)):
            t0 = time.perf_counter()
            try:
                approx = algo(results, delta)
            except InfeasibleError as exc:
                print(f"{name} delta={text}: {exc}", file=sys.stderr)
                continue
            ms = (time.perf_counter() - t0) * 1e3
            w.writerow([name, text, f"{ms:.2f}", approx.n_tiles, f"{precision(approx, results):.4f}",
                        space_cost(approx), exact_cost])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
