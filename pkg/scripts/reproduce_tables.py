#!/usr/bin/env python3
"""Sequential vs parallel encrypt/decrypt over the default size ladder.

Writes a CSV and a markdown table pair (encryption, decryption) and prints
the throughput-shape summary: sequential spread, parallel growth and the
small-size crossover.

    python scripts/reproduce_tables.py --workers 4 --out-dir results/
"""

import argparse
import os
from pathlib import Path

from aesbench.bench import DEFAULT_SIZES, RunConfig, emit_report, run_benchmark


def summarize(records, op):
    thr = {(r.size_bytes, r.path): r.throughput_bytes_per_second for r in records if r.operation == op}
    seq = [thr[(s, "sequential")] for s in DEFAULT_SIZES if s >= 9302]
    growth = thr[(DEFAULT_SIZES[-1], "parallel")] / thr[(DEFAULT_SIZES[0], "parallel")]
    crossover = next((s for s in DEFAULT_SIZES if thr[(s, "parallel")] > thr[(s, "sequential")]), None)
    print(f"{op}: sequential max/min (>=9302 B) = {max(seq) / min(seq):.2f}, "
          f"parallel growth 1202 -> 1190402 = {growth:.1f}x, "
          f"parallel first wins at {crossover if crossover else 'no size'}")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--workers", type=int, default=max(4, os.cpu_count() or 1))
    ap.add_argument("--granularity", type=int, default=1)
    ap.add_argument("--mode", default="ecb", choices=["ecb", "ctr"])
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(mode=args.mode, workers=args.workers, granularity=args.granularity,
                    repetitions=args.reps)
    records = run_benchmark(cfg)
    stem = f"{args.mode}_w{args.workers}_g{args.granularity}"
    print(emit_report(records, "csv", args.out_dir / f"{stem}.csv"))
    print(emit_report(records, "markdown", args.out_dir / f"{stem}.md"))
    print(f"host hardware threads: {os.cpu_count()}")
    for op in ("encrypt", "decrypt"):
        summarize(records, op)


if __name__ == "__main__":
    main()
