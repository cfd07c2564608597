"""Time the numba and numpy versions of each hot kernel on the same inputs.

    python benchmarks/bench_kernels.py [--quick]

Each kernel is warmed up once (numba compile or cache load) before timing,
and the two outputs are compared for equality.
"""
import argparse
import time

import numpy as np

from cyclosrg import kernels
from cyclosrg._accel import HAVE_NUMBA
from cyclosrg.field import build_field


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def histogram_case(p, f, N):
    F = build_field(p, f)
    mat = F.mult_matrix(F.primitive)
    v0 = np.zeros(f, np.int64)
    v0[0] = 1
    args = (mat, F.trace_vector(), F.trace_form(), v0, 0, F.q - 1, N, p)
    return f"histogram F_{p}^{f} N={N}", lambda nb: kernels.trace_histogram_range(*args, use_numba=nb)


def powers_case(p, f):
    F = build_field(p, f)
    mat = F.mult_matrix(F.primitive)
    return f"power_indices F_{p}^{f}", lambda nb: kernels.power_indices(mat, F.q - 1, p, use_numba=nb)


def squares_case(R):
    return f"three_squares R={R}", lambda nb: kernels.three_squares(R, use_numba=nb)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()
    if a.quick:
        cases = [histogram_case(3, 9, 13), powers_case(3, 9), squares_case(10 ** 5)]
    else:
        cases = [histogram_case(7, 9, 37), histogram_case(3, 13, 13), powers_case(5, 8),
                 squares_case(10 ** 6), squares_case(10 ** 7)]
    print(f"{'kernel':34s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}  equal")
    for name, fn in cases:
        t_np, out_np = best_of(lambda: fn(False), a.repeat)
        if HAVE_NUMBA:
            fn(True)
            t_nb, out_nb = best_of(lambda: fn(True), a.repeat)
            same = np.array_equal(out_np, out_nb)
            print(f"{name:34s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.2f}  {same}")
        else:
            print(f"{name:34s} {t_np:10.4f} {'-':>10s} {'-':>8s}  -")


if __name__ == "__main__":
    main()
