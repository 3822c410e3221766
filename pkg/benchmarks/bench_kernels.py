#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two pointwise hot operations of the split-step loop (nonlinear
phase rotation, spectral propagator multiply) and the max-|u|^2 reduction
on the production lattice sizes, plus a full fused Strang step for context
(FFT time is backend-independent). Run:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np
import scipy.fft as sfft

from q1dnls import kernels

SHAPES = [(64, 256), (64, 96, 96), (64, 128, 128)]
REPS = 20


def timeit(fn, reps=REPS):
    fn()  # warm-up (numba compilation, cache effects)
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps * 1e3


def main():
    if not kernels.NUMBA_AVAILABLE:
        print("numba not importable: only the numpy path is available")
    rng = np.random.default_rng(0)
    header = f"{'shape':>14} {'op':>10} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for shape in SHAPES:
        u = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)).astype(
            np.complex128
        )
        phase = np.ascontiguousarray(np.exp(-1j * rng.standard_normal(shape)))

        rows = []
        a = u.copy()
        t_np = timeit(lambda: kernels._rotate_nonlinear_numpy(a.reshape(-1), 1e-3))
        if kernels.NUMBA_AVAILABLE:
            b = u.copy()
            t_nb = timeit(lambda: kernels._rotate_nonlinear_numba(b.reshape(-1), 1e-3))
        else:
            t_nb = float("nan")
        rows.append(("rotate", t_np, t_nb))

        a = u.copy()
        t_np = timeit(lambda: kernels._multiply_inplace_numpy(a, phase))
        if kernels.NUMBA_AVAILABLE:
            b = u.copy()
            t_nb = timeit(
                lambda: kernels._multiply_inplace_numba(b.reshape(-1), phase.reshape(-1))
            )
        else:
            t_nb = float("nan")
        rows.append(("multiply", t_np, t_nb))

        t_np = timeit(lambda: kernels._max_abs2_numpy(u.reshape(-1)))
        if kernels.NUMBA_AVAILABLE:
            t_nb = timeit(lambda: kernels._max_abs2_numba(u.reshape(-1)))
        else:
            t_nb = float("nan")
        rows.append(("max_abs2", t_np, t_nb))

        c = u.copy()

        def step():
            nonlocal c
            uh = sfft.fftn(c)
            kernels.multiply_inplace(uh, phase)
            c = sfft.ifftn(uh)
            kernels.rotate_nonlinear(c, 1e-3)

        t_step = timeit(step, reps=10)
        for op, t_np, t_nb in rows:
            speed = t_np / t_nb if t_nb == t_nb else float("nan")
            print(f"{str(shape):>14} {op:>10} {t_np:>10.3f} {t_nb:>10.3f} {speed:>8.2f}")
        print(f"{str(shape):>14} {'full step':>10} {t_step:>10.3f} ms "
              f"({kernels.backend_name()} backend incl. FFT)")
    print("\nactive backend:", kernels.backend_name(),
          "(set Q1DNLS_NO_NUMBA=1 to force the numpy path)")


if __name__ == "__main__":
    main()
