"""Build time vs number of points for the exact algorithms.

Writes one bench CSV row per (algorithm, n).  Example:

    python3 scripts/run_scaling.py --algos qbase,qgraph,qscan,qsweep --n 100,200,400,800
    python3 scripts/run_scaling.py --algos dbase,dsubset,dscan --n 10,20,40 --s 100
"""
import argparse
import sys

from skydiag.bench import BenchSuite, bench, write_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--algos", default="qbase,qgraph,qscan,qsweep")
    ap.add_argument("--n", default="100,200,400,800")
    ap.add_argument("--d", default="2")
    ap.add_argument("--s", default="1000")
    ap.add_argument("--dist", default="inde", choices=("inde", "corr", "anti"))
    ap.add_argument("--distinct", action="store_true", help="no two points share a coordinate")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    suite = BenchSuite(
        algos=tuple(args.algos.split(",")),
        ns=tuple(int(v) for v in args.n.split(",")),
        ds=tuple(int(v) for v in args.d.split(",")),
        ss=tuple(int(v) for v in args.s.split(",")),
        distribution=args.dist,
        distinct=args.distinct,
        seed=args.seed,
    )
    records = bench(suite)
    write_csv(records, sys.stdout if args.out == "-" else args.out)


if __name__ == "__main__":
    main()
