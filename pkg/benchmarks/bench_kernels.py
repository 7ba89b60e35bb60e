"""Benchmark the compiled kernels against the NumPy reference backend.

Run:  python benchmarks/bench_kernels.py

Times the spherical-Bessel table builder and both main-system series-sum
kernels on shapes representative of a production inverse solve (dataset
sizes M, truncation order N = 7), and reports the cross-backend agreement
on each case.
"""

import time

import numpy as np

from slinverse.kernels import _ref

try:
    from slinverse.kernels import _fast
except ImportError:
    _fast = None


def _time(fn, *args, repeat=7):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _flatmax(pair_or_array):
    if isinstance(pair_or_array, tuple):
        return max(np.max(np.abs(p)) for p in pair_or_array)
    return np.max(np.abs(pair_or_array))


def _diff(a, b):
    if isinstance(a, tuple):
        return max(np.max(np.abs(x - y)) for x, y in zip(a, b))
    return np.max(np.abs(a - b))


def main():
    if _fast is None:
        print("compiled backend not available; build with `pip install -e .`")
        return

    rng = np.random.default_rng(0)
    rows = []
    for M in (2000, 5000, 20000):
        n = np.arange(1, M + 1, dtype=float)
        rho = n + 1.4 / (np.pi * n)
        alpha = np.pi / 2 - 0.5 / n**2
        z = rho * 1.1

        t_ref, a = _time(_ref.bessel_table, z, 15)
        t_fast, b = _time(_fast.bessel_table, z, 15)
        rows.append((f"bessel_table     M={M:6d}", t_ref, t_fast, _diff(a, b)))

        t_ref, a = _time(_ref.series_sums_modified, 1.1, rho, alpha, 1.4, 7)
        t_fast, b = _time(_fast.series_sums_modified, 1.1, rho, alpha, 1.4, 7)
        rows.append((f"sums_modified    M={M:6d}", t_ref, t_fast, _diff(a, b)))

        t_ref, a = _time(_ref.series_sums_integrated, 1.1, rho, alpha, 7)
        t_fast, b = _time(_fast.series_sums_integrated, 1.1, rho, alpha, 7)
        rows.append((f"sums_integrated  M={M:6d}", t_ref, t_fast, _diff(a, b)))

    print(f"{'kernel':28s} {'reference':>11s} {'compiled':>11s} {'speedup':>8s} {'max diff':>10s}")
    for name, t_ref, t_fast, d in rows:
        print(f"{name:28s} {t_ref * 1e3:9.2f} ms {t_fast * 1e3:9.2f} ms "
              f"{t_ref / t_fast:7.1f}x {d:10.2e}")


if __name__ == "__main__":
    main()
