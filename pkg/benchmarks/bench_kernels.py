"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times one outward shooting integration (s-wave, q = -1, reference-table scale
parameters) and a vectorized Jacobi evaluation on each available backend,
and checks that the backends return identical results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from wsdirac._backend import available_backends


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    a, R0, q, V0, m, A, E = 1.425, 14.25, -1.0, 2.2, 15.0, -5.0, -9.561
    c0 = (m + E - A) * (m - E)
    c1 = -(m + E - A) * V0
    shoot = (R0 + 1e-6 * a, R0 + 25 * a, 1e-6 * a, 1.0, 0.0, c0, c1, R0, a, q, 1e-12, a, 1_000_000)
    x = np.linspace(-1.0, 1.0, 100_001)

    results = {}
    print(f"{'backend':<10} {'integrate [ms]':>15} {'jacobi n=10 [ms]':>17} {'steps':>7}")
    for name, mod in available_backends().items():
        out = mod.integrate(*shoot)
        jac = mod.jacobi_array(10, 44.8, 1.0, x)
        t_int = _best(lambda: mod.integrate(*shoot), args.repeat)
        t_jac = _best(lambda: mod.jacobi_array(10, 44.8, 1.0, x), args.repeat)
        results[name] = (out, jac)
        print(f"{name:<10} {1e3 * t_int:>15.3f} {1e3 * t_jac:>17.3f} {out[4]:>7d}")

    if len(results) == 2:
        (o1, j1), (o2, j2) = results.values()
        same = o1 == o2
        jdiff = float(np.max(np.abs(j1 - j2) / np.maximum(1.0, np.abs(j1))))
        print(f"integrate identical: {same}; jacobi max rel diff: {jdiff:.3g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
