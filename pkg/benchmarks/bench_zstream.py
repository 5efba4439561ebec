"""Throughput of the two z-stream kernels.

Runs `fill` over a range of point counts and prints points per second for
the compiled kernel and the numpy fallback, plus a cross-check that both
produce identical blocks.

    python3 benchmarks/bench_zstream.py [--max-exp 11] [--block 65536]
"""

import argparse
import time

import numpy as np

from kochawave import _zkernel_py
from kochawave.construct import BACKEND, _kernel


def consume(mod, count, block):
    total = 0
    for a, b in mod.fill(count, block):
        total += len(a)
    return total


def cross_check(count, block):
    for (a1, b1), (a2, b2) in zip(_kernel.fill(count, block),
                                  _zkernel_py.fill(count, block)):
        if not (np.array_equal(a1, a2) and np.array_equal(b1, b2)):
            raise AssertionError("kernels disagree")


def bench(mod, count, block, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        n = consume(mod, count, block)
        best = min(best, time.perf_counter() - t0)
        assert n == count
    return count / best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-exp", type=int, default=11,
                    help="largest count is 4**MAX_EXP + 1 (default 11)")
    ap.add_argument("--block", type=int, default=65536)
    args = ap.parse_args()

    print(f"active backend: {BACKEND} ({_kernel.KERNEL_NAME})")
    cross_check(4 ** 7 + 1, args.block)
    print("kernels agree on 4**7 + 1 points")
    print(f"{'count':>12} {'active pts/s':>14} {'numpy pts/s':>14} {'ratio':>7}")
    for e in range(7, args.max_exp + 1):
        count = 4 ** e + 1
        fast = bench(_kernel, count, args.block)
        slow = bench(_zkernel_py, count, args.block)
        print(f"{count:>12} {fast:>14.3e} {slow:>14.3e} {fast / slow:>7.2f}")


if __name__ == "__main__":
    main()
