"""Benchmark the compiled Frank-Wolfe kernel against the numpy fallback.

Runs the same minimax design problems through both backends, checks they
agree, and prints a timing table.

Usage: python3 benchmarks/bench_fw.py [--iters N]
"""

import argparse
import itertools
import time

import numpy as np

from linbai._fw import _fwcore, fwpy


def problems(rng):
    out = []
    for d, K in ((5, 15), (10, 30), (20, 60)):
        arms = rng.normal(size=(K, d))
        out.append((f"G d={d} K={K}", arms, arms))
        pairs = np.array([arms[i] - arms[j]
                          for i, j in itertools.combinations(range(8), 2)])
        out.append((f"XY d={d} K={K} P={len(pairs)}", arms, pairs))
    return out


def run(fn, arms, dirs, iters, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        lam, value, n, _ = fn(arms, dirs, iters, 1e-9)
        best = min(best, time.perf_counter() - t0)
    return best, lam, value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--iters", type=int, default=5000)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'problem':28s} {'pure (ms)':>10s} {'compiled (ms)':>14s} "
          f"{'speedup':>8s}  agree")
    for name, arms, dirs in problems(rng):
        tp, lam_p, val_p = run(fwpy.minimax_design, arms, dirs, args.iters)
        tc, lam_c, val_c = run(_fwcore.minimax_design, arms, dirs, args.iters)
        agree = (abs(val_p - val_c) <= 1e-6 * max(val_p, 1.0)
                 and np.allclose(lam_p, lam_c, atol=1e-8))
        print(f"{name:28s} {tp * 1e3:10.2f} {tc * 1e3:14.2f} "
              f"{tp / tc:8.1f}x  {agree}")


if __name__ == "__main__":
    main()
