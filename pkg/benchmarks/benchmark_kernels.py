#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the fused disc-batch reduction and the explicit-coordinate reduction on
the same workload with both backends, checks the outputs are bit-identical,
and prints a timing table. The active default backend follows
``RELAYSIM_NO_NUMBA``; this script always times both explicitly.

Usage: python benchmarks/benchmark_kernels.py [--trials N] [--lambda L] [--tau R]
"""
import argparse
import math
import time

import numpy as np

from relaysim.kernels import (HAS_NUMBA, disc_batch_stats_numba,
                              disc_batch_stats_numpy, field_stats_numba,
                              field_stats_numpy, kernel_backend)


def make_workload(n_trials: int, intensity: float, tau: float, seed: int = 123):
    rng = np.random.Generator(np.random.Philox(key=seed))
    counts = rng.poisson(intensity * math.pi * tau * tau, size=n_trials)
    offsets = np.zeros(n_trials + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    total = int(offsets[-1])
    u1 = rng.random(total)
    u2 = rng.random(total)
    radii = tau * np.sqrt(u1)
    angles = 2.0 * math.pi * u2
    xs = radii * np.cos(angles)
    ys = radii * np.sin(angles)
    return u1, u2, xs, ys, offsets


def timed(fn, *args, repeats=3):
    best = math.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--lambda", dest="intensity", type=float, default=1.0)
    ap.add_argument("--tau", type=float, default=10.0)
    args = ap.parse_args()

    u1, u2, xs, ys, offsets = make_workload(args.trials, args.intensity, args.tau)
    n_points = u1.size
    print(f"workload: {args.trials} trials, {n_points} points "
          f"(lambda={args.intensity}, tau={args.tau})")
    print(f"numba available: {HAS_NUMBA}; default backend: {kernel_backend()}")

    kwargs = dict(threshold=3.0, scale_source=1.0, scale_destination=1.3)
    if HAS_NUMBA:  # warm the JIT outside the timed region
        disc_batch_stats_numba(u1[:64], u2[:64], np.array([0, 64], dtype=np.int64),
                               args.tau, 1.0, **kwargs)
        field_stats_numba(xs[:64], ys[:64], np.array([0, 64], dtype=np.int64),
                          1.0, **kwargs)

    rows = []
    t_np, ref = timed(disc_batch_stats_numpy, u1, u2, offsets, args.tau, 1.0, 3.0, 1.0, 1.3)
    rows.append(("disc-batch", "numpy", t_np, n_points / t_np / 1e6))
    if HAS_NUMBA:
        t_nb, got = timed(disc_batch_stats_numba, u1, u2, offsets, args.tau, 1.0, 3.0, 1.0, 1.3)
        rows.append(("disc-batch", "numba", t_nb, n_points / t_nb / 1e6))
        assert all(np.array_equal(ref[k], got[k]) for k in ref), "backend mismatch"

    t_np, ref = timed(field_stats_numpy, xs, ys, offsets, 1.0, 3.0, 1.0, 1.3)
    rows.append(("xy", "numpy", t_np, n_points / t_np / 1e6))
    if HAS_NUMBA:
        t_nb, got = timed(field_stats_numba, xs, ys, offsets, 1.0, 3.0, 1.0, 1.3)
        rows.append(("xy", "numba", t_nb, n_points / t_nb / 1e6))
        assert all(np.array_equal(ref[k], got[k]) for k in ref), "backend mismatch"

    print(f"\n{'kernel':<12}{'backend':<9}{'seconds':>10}{'Mpoints/s':>12}")
    for kernel, backend, secs, rate in rows:
        print(f"{kernel:<12}{backend:<9}{secs:>10.3f}{rate:>12.1f}")
    if HAS_NUMBA:
        for kernel in ("disc-batch", "xy"):
            ts = {b: s for k, b, s, _ in rows if k == kernel}
            print(f"{kernel}: numba is {ts['numpy'] / ts['numba']:.1f}x faster")


if __name__ == "__main__":
    main()
