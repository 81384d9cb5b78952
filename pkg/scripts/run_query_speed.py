"""Diagram lookup vs from-scratch quadrant skyline over 1000 random queries.

    python3 scripts/run_query_speed.py --n 100000 --s 200
"""
import argparse
import json

from skydiag.bench import query_speed


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--s", type=int, default=200)
    ap.add_argument("--queries", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    r = query_speed(args.n, args.s, args.queries, args.seed)
    print(json.dumps({"n": r.n, "s": r.s, "queries": r.queries, "build_s": round(r.build_s, 3),
                      "lookup_ms": round(r.lookup_s * 1e3, 3), "recompute_ms": round(r.scratch_s * 1e3, 1),
                      "speedup": round(r.ratio), "mismatches": r.mismatches}))


if __name__ == "__main__":
    main()
