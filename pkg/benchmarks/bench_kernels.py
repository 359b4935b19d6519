"""Time the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from transmon3d import _kernels_py

try:
    from transmon3d import _kernels as _compiled
except ImportError:
    _compiled = None


def _lindblad_case(batch, dim, steps):
    rng = np.random.default_rng(0)
    rho = np.zeros((batch, dim, dim), dtype=complex)
    rho[:, 0, 0] = rho[:, 1, 1] = rho[:, 0, 1] = rho[:, 1, 0] = 0.5
    h = np.diag(2 * np.pi * 1e9 * np.arange(dim) * 1e-4).astype(complex)
    det = 1e5 * rng.standard_normal((batch, steps))
    return (rho, h, np.arange(dim, dtype=float), det, steps, 1.7e4, 4.7e4, 1e-9)


def _ou_case(batch, steps):
    rng = np.random.default_rng(1)
    return (rng.standard_normal(batch), rng.standard_normal((batch, steps, 2)), 5e-7, 1e5, 1e-5)


CASES = {
    "lindblad 2-level, 200 shots x 2000 steps": ("lindblad_rk4", lambda: _lindblad_case(200, 2, 2000)),
    "lindblad 3-level, 50 shots x 2000 steps": ("lindblad_rk4", lambda: _lindblad_case(50, 3, 2000)),
    "ou integrals, 10000 paths x 200 steps": ("ou_integrals", lambda: _ou_case(10_000, 200)),
}


def best_time(fn, args, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    opts = parser.parse_args()
    print(f"{'case':45s} {'numpy s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, (kernel, make) in CASES.items():
        args = make()
        t_py = best_time(getattr(_kernels_py, kernel), args, opts.repeat)
        if _compiled is None:
            print(f"{name:45s} {t_py:10.3f} {'n/a':>10s} {'n/a':>8s}")
            continue
        t_cy = best_time(getattr(_compiled, kernel), args, opts.repeat)
        print(f"{name:45s} {t_py:10.3f} {t_cy:10.3f} {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
