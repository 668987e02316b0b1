#!/usr/bin/env python3
"""Side-by-side timing of the numba and numpy kernel paths.

    python benchmarks/bench_kernels.py [--sizes 10000,100000,1000000]

The first numba call per kernel compiles (or loads from cache) and is
excluded.  Each row also checks that both paths agree.
"""
import argparse
import sys
import time

import numpy as np

from bellga import ga, kernels
from bellga.correlators import algebraic_correlation, mc


def best_of(fn, repeat=3):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="10000,100000,1000000")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if not kernels.HAVE_NUMBA:
        print("numba backend unavailable (BELLGA_DISABLE_NUMBA set or numba missing)")
        sys.exit(1)

    rng = np.random.default_rng(0)
    t0 = time.perf_counter()
    kernels.counter_signs_numba(0, 0, 8)
    kernels.block_moments_numba(np.zeros((4, 2)), np.zeros(2))
    kernels.batch_geometric_product_numba(np.zeros((2, 8)), np.zeros((2, 8)),
                                          ga.PRODUCT_INDEX, ga.PRODUCT_SIGN)
    print(f"JIT warmup: {time.perf_counter() - t0:.2f}s\n")

    print(f"{'kernel':<24} {'n':>9}  {'numpy (s)':>10}  {'numba (s)':>10}  {'speedup':>8}  {'agree':>6}")
    print("-" * 76)
    for n in sizes:
        a = kernels.counter_signs_numpy(3, 0, n)
        b = kernels.counter_signs_numba(3, 0, n)
        t_np = best_of(lambda: kernels.counter_signs_numpy(3, 0, n))
        t_nb = best_of(lambda: kernels.counter_signs_numba(3, 0, n))
        print(f"{'counter_signs':<24} {n:>9}  {t_np:>10.4f}  {t_nb:>10.4f}  {t_np / t_nb:>7.1f}x  "
              f"{str(np.array_equal(a, b)):>6}")

        vals = rng.normal(size=(n, 8))
        shift = vals[0]
        a = kernels.block_moments_numpy(vals, shift)
        b = kernels.block_moments_numba(vals, shift)
        t_np = best_of(lambda: kernels.block_moments_numpy(vals, shift))
        t_nb = best_of(lambda: kernels.block_moments_numba(vals, shift))
        print(f"{'block_moments':<24} {n:>9}  {t_np:>10.4f}  {t_nb:>10.4f}  {t_np / t_nb:>7.1f}x  "
              f"{str(np.allclose(a, b, rtol=1e-10)):>6}")

        X, Y = rng.uniform(-1, 1, (n, 8)), rng.uniform(-1, 1, (n, 8))
        args_ = (X, Y, ga.PRODUCT_INDEX, ga.PRODUCT_SIGN)
        a = kernels.batch_geometric_product_numpy(*args_)
        b = kernels.batch_geometric_product_numba(*args_)
        t_np = best_of(lambda: kernels.batch_geometric_product_numpy(*args_))
        t_nb = best_of(lambda: kernels.batch_geometric_product_numba(*args_))
        print(f"{'batch_geometric_product':<24} {n:>9}  {t_np:>10.4f}  {t_nb:>10.4f}  "
              f"{t_np / t_nb:>7.1f}x  {str(np.allclose(a, b, atol=1e-13)):>6}")

    n = sizes[-1]
    t = best_of(lambda: algebraic_correlation(ga.X_AXIS, ga.Y_AXIS, "oriented", mc(n, 1)), repeat=1)
    print(f"\nend-to-end bivector MC correlation, n={n} ({kernels.BACKEND} backend): {t:.3f}s")


if __name__ == "__main__":
    main()
