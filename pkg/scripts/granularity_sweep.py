#!/usr/bin/env python3
"""Parallel throughput at the largest ladder size across workers x granularity."""

import argparse

from aesbench.bench import RunConfig, run_benchmark


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=1190402)
    ap.add_argument("--workers", default="1,2,4,8")
    ap.add_argument("--granularity", default="1,2,4,16,64")
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    print(f"{'workers':>7} {'gran':>5} {'seq MB/s':>10} {'par MB/s':>10} {'speedup':>8}")
    for w in map(int, args.workers.split(",")):
        for g in map(int, args.granularity.split(",")):
            recs = run_benchmark(RunConfig(workers=w, granularity=g, sizes=(args.size,),
                                           repetitions=args.reps, operations=("encrypt",)))
            thr = {r.path: r.throughput_bytes_per_second for r in recs}
            print(f"{w:>7} {g:>5} {thr['sequential'] / 1e6:>10.1f} {thr['parallel'] / 1e6:>10.1f} "
                  f"{thr['parallel'] / thr['sequential']:>8.2f}")


if __name__ == "__main__":
    main()
