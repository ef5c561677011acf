#!/usr/bin/env python3
"""Numba vs numpy kernels on solver-sized workloads.

    python benchmarks/bench_kernels.py [--repeat 20]

Both implementations are called directly, so the result does not depend on
STEPODE_DISABLE_NUMBA.
"""

import argparse
import time

import numpy as np

from stepode import kernels


def best_of(fn, args, repeat):
    fn(*args)  # compile / warm up
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    for n, K in ((629, 20), (10_000, 20), (10_000, 200)):
        c, d = rng.normal(size=K), rng.normal(size=K)
        x = rng.uniform(-np.pi, np.pi, n)
        yield f"eval_series   n={n:<6} K={K}", "eval_series", (0.5, c, d, 1.0, x)

    for cells, n, K in ((4, 629, 20), (64, 20_000, 20), (64, 20_000, 100)):
        half = rng.normal(size=cells)
        C, D = rng.normal(size=(cells, K)), rng.normal(size=(cells, K))
        x = rng.uniform(-np.pi, np.pi, n)
        idx = rng.integers(0, cells, n)
        yield f"eval_cells    cells={cells:<3} n={n:<6} K={K}", "eval_cells", (idx, half, C, D, 1.0, x)

    for rows, order, K in ((4, 22, 20), (2001, 2, 20), (2001, 10, 64)):
        A = rng.uniform(-1, 1, (rows, order + 1))
        yield f"symbol_table  rows={rows:<5} order={order} K={K}", "symbol_table", (A, K, 1.0)

    for Q, K in ((41, 10), (161, 40), (801, 200)):
        n = 8 * Q
        x = np.sort(rng.uniform(-np.pi, np.pi, n))
        w = np.full(n, 2 * np.pi / n)
        yield f"project       nodes={n:<5} K={K}", "project", (rng.normal(size=n), x, w, K, 1.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    print(f"{'kernel':<44} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for label, name, fargs in cases(rng):
        t_np = best_of(getattr(kernels, f"{name}_numpy"), fargs, args.repeat)
        t_nb = best_of(getattr(kernels, f"{name}_numba"), fargs, args.repeat)
        print(f"{label:<44} {t_np * 1e3:11.3f} {t_nb * 1e3:11.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
