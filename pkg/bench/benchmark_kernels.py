#!/usr/bin/env python3
"""Side-by-side benchmark of the JIT kernels vs the pure-Python/NumPy path.

The two hot loops are the tridiagonal LDL^T inertia count (driven ~60x per
mode by the Hardy-constant bisection) and the adaptive phase sweep.  The
dispatched implementations live in maghardy._kernels; the *_py fallbacks are
always importable, so both paths are timed in one process.  Run with
MAGNETIC_HARDY_NO_NUMBA=1 to confirm the dispatched path degrades to the
fallback.

Usage: python bench/benchmark_kernels.py [--n 4000] [--shifts 60]
"""

import argparse
import time

import numpy as np

from maghardy import _kernels


def time_fn(fn, *args, repeat=5):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_inertia(n, shifts):
    rng = np.random.default_rng(0)
    kd = rng.uniform(1.0, 3.0, size=n)
    off = rng.uniform(-1.0, 0.0, size=n - 1)
    md = rng.uniform(0.5, 1.5, size=n)
    mus = np.linspace(0.0, 2.0, shifts)

    def sweep(fn):
        total = 0
        for mu in mus:
            total += fn(kd, off, md, mu, 1e-290)[0]
        return total

    # warmup compiles the JIT path; not timed
    sweep(_kernels.tridiag_inertia_shifted)
    t_fast, c_fast = time_fn(sweep, _kernels.tridiag_inertia_shifted)
    t_py, c_py = time_fn(sweep, _kernels.tridiag_inertia_shifted_py, repeat=2)
    assert c_fast == c_py, "paths disagree"
    return t_fast, t_py


def bench_prufer(n):
    tq = np.linspace(-40.0, 2.0, n)
    qq = 1.0 - 30.0 * np.exp(2.0 * tq) * (tq < 0)

    def sweep(fn):
        theta, fail = fn(tq, qq, -40.0, 2.0, 1e-6, 0.05, 1e-12)
        assert fail == 0
        return theta

    sweep(_kernels.prufer_sweep)
    t_fast, th_fast = time_fn(sweep, _kernels.prufer_sweep)
    t_py, th_py = time_fn(sweep, _kernels.prufer_sweep_py, repeat=2)
    assert abs(th_fast - th_py) < 1e-9, "paths disagree"
    return t_fast, t_py


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4000, help="matrix size / sample count")
    ap.add_argument("--shifts", type=int, default=60, help="bisection shifts per sweep")
    args = ap.parse_args()

    print(f"numba path enabled: {_kernels.NUMBA_ENABLED}")
    print(f"{'kernel':<24} {'jit (s)':>10} {'pure (s)':>10} {'speedup':>9}")
    print("-" * 57)

    t_fast, t_py = bench_inertia(args.n, args.shifts)
    print(f"{'inertia x%d shifts' % args.shifts:<24} {t_fast:>10.4f} {t_py:>10.4f} {t_py / t_fast:>8.1f}x")

    t_fast, t_py = bench_prufer(args.n)
    print(f"{'prufer sweep':<24} {t_fast:>10.4f} {t_py:>10.4f} {t_py / t_fast:>8.1f}x")


if __name__ == "__main__":
    main()
