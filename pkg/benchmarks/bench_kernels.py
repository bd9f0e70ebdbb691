"""Benchmark the jitted lattice kernels against the pure-numpy fallback.

Runs the ordered nested lattice sum (the hot path behind every direct
evaluation) and the compensated cumulative sum on realistic sizes, on both
code paths, and prints a table.  The numbers must agree to rounding.

Usage:  python benchmarks/bench_kernels.py
        MULTIWP_PURE_NUMPY=1 python benchmarks/bench_kernels.py  (numpy only)
"""
import time

import numpy as np

from multiwp import kernels
from multiwp.kernels import lattice_sorted


def timeit(fn, *args, repeat=5):
    best = float("inf")
    val = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        val = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return val, best


def bench_ordered_sum():
    tau = 2j
    rows = []
    for M, N, exps in [(12, 8000, [2, 2]), (12, 32000, [2, 2]),
                       (12, 32000, [2, 2, 2]), (24, 16000, [3, 2])]:
        w, pos0 = lattice_sorted(tau, M, N)
        region = np.ascontiguousarray(w[pos0 + 1:])
        shifts = np.full(len(exps), 0.31 + 0.17j, dtype=np.complex128)
        e = np.array(exps, dtype=np.int64)
        paths = [("numpy", kernels._ordered_sum_numpy)]
        if kernels.HAVE_NUMBA:
            kernels._ordered_sum_numba(region[:64], shifts, e, True)  # warm up
            paths.append(("numba", kernels._ordered_sum_numba))
        vals = {}
        for name, fn in paths:
            vals[name], dt = timeit(fn, region, shifts, e, True)
            rows.append((f"ordered_sum M={M} N={N} k={exps}", name,
                         len(region) * len(exps), dt))
        if len(vals) == 2:
            assert abs(vals["numba"] - vals["numpy"]) < 1e-10 * (1 + abs(vals["numpy"]))
    return rows


def bench_kahan():
    y = np.arange(1.0, 2e6 + 1) ** -2.0
    rows = []
    val_np = np.cumsum(y.astype(np.longdouble)).astype(np.float64)
    _, dt = timeit(lambda: np.cumsum(y.astype(np.longdouble)).astype(np.float64))
    rows.append(("kahan_cumsum n=2e6", "numpy(longdouble)", len(y), dt))
    if kernels.HAVE_NUMBA:
        kernels._kahan_cumsum_numba(y[:64])
        val_nb, dt = timeit(kernels._kahan_cumsum_numba, y)
        rows.append(("kahan_cumsum n=2e6", "numba", len(y), dt))
        assert abs(val_nb[-1] - val_np[-1]) < 1e-12
    return rows


def main():
    print(f"numba available: {kernels.HAVE_NUMBA}   "
          f"active path: {'numba' if kernels.USING_NUMBA else 'pure numpy'}")
    rows = bench_ordered_sum() + bench_kahan()
    print(f"\n{'kernel':42} {'path':18} {'points':>10} {'best (ms)':>10} {'Mpts/s':>8}")
    for name, path, n, dt in rows:
        print(f"{name:42} {path:18} {n:>10} {dt * 1e3:>10.2f} {n / dt / 1e6:>8.0f}")


if __name__ == "__main__":
    main()
