#!/usr/bin/env python3
"""Benchmark the jit kernel lane against the pure-numpy lane.

Times the three hot kernels — the Walsh-Hadamard transform, the dense
xor-translate, and the translate-union sumset — on both lanes across a range
of space sizes, reporting best-of-N wall seconds and the jit speedup.  The
library picks its lane once at import (see the F2FREIMAN_BACKEND variable);
this script imports both lane modules directly so one process can compare
them side by side.

Usage:
    python3 bench/bench_kernels.py
    python3 bench/bench_kernels.py --sizes 16,20,22 --repeats 7 --csv out.csv
"""

import argparse
import csv
import sys
import time

import numpy as np

from f2freiman import _kernels_numpy as numpy_lane
from f2freiman.kernels import BACKEND

try:
    from f2freiman import _kernels_numba as numba_lane
except Exception:  # missing or broken jit toolchain: report numpy lane only
    numba_lane = None

KERNELS = ("fwht", "translate", "sumset_union")


def _best(repeats, fn, *, refresh=None):
    best = float("inf")
    for _ in range(repeats):
        if refresh is not None:
            refresh()
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _bench_lane(lane, kernel, m, repeats, translates, rng):
    n = 1 << m
    if kernel == "fwht":
        v = rng.integers(0, 2, size=n).astype(np.int64)
        buf = np.empty_like(v)
        return _best(
            repeats,
            lambda: lane.fwht_i64_inplace(buf),
            refresh=lambda: np.copyto(buf, v),
        )
    if kernel == "translate":
        bits = (rng.random(n) < 0.5).astype(np.uint8)
        a = n - 1  # flips every axis: the worst case for the block swaps
        return _best(repeats, lambda: lane.xor_translate_u8(bits, a))
    # sparse base so the union does not fill up and exit early
    bits = (rng.random(n) < 1 / 64).astype(np.uint8)
    xs = rng.integers(0, n, size=translates, dtype=np.int64)
    return _best(repeats, lambda: lane.sumset_union_u8(bits, xs))


def _warm_jit():
    v = np.zeros(2, dtype=np.int64)
    b = np.zeros(2, dtype=np.uint8)
    numba_lane.fwht_i64_inplace(v.copy())
    numba_lane.xor_translate_u8(b, 1)
    numba_lane.sumset_union_u8(b, np.zeros(1, dtype=np.int64))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes",
        default="14,16,18,20",
        help="comma-separated log2 space sizes (default 14,16,18,20, max 24)",
    )
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    parser.add_argument(
        "--translates", type=int, default=64, help="translate count for the union kernel"
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--csv", default=None, help="also write rows to this CSV file")
    args = parser.parse_args(argv)

    sizes = sorted({int(s) for s in args.sizes.split(",") if s.strip()})
    if not sizes or sizes[0] < 1 or sizes[-1] > 24:
        parser.error("sizes must be integers in 1..24")

    lanes = [("numpy", numpy_lane)]
    if numba_lane is not None:
        _warm_jit()
        lanes.append(("numba", numba_lane))
    else:
        print("jit lane unavailable; timing the numpy lane only", file=sys.stderr)

    print(f"installed package lane: {BACKEND}; repeats: best of {args.repeats}")
    header = f"{'kernel':<13} {'m':>3} " + "".join(f"{name + ' (s)':>12}" for name, _ in lanes)
    if len(lanes) == 2:
        header += f"{'speedup':>9}"
    print(header)
    print("-" * len(header))

    rows = []
    for kernel in KERNELS:
        for m in sizes:
            rng = np.random.default_rng(args.seed)
            secs = [
                _bench_lane(lane, kernel, m, args.repeats, args.translates, rng)
                for _, lane in lanes
            ]
            line = f"{kernel:<13} {m:>3} " + "".join(f"{s:>12.6f}" for s in secs)
            if len(secs) == 2:
                line += f"{secs[0] / secs[1]:>8.2f}x"
            print(line)
            for (name, _), s in zip(lanes, secs):
                rows.append({"kernel": kernel, "m": m, "lane": name, "seconds": s})

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["kernel", "m", "lane", "seconds"])
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {len(rows)} rows to {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
