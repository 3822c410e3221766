"""Pointwise hot kernels for the split-step loop.

Two interchangeable backends: numba @njit(parallel) kernels and pure-numpy
fallbacks. Selection happens once at import: set Q1DNLS_NO_NUMBA=1 to force
the numpy path (the fallback also engages automatically when numba is not
importable). Both backends produce identical physics; see
benchmarks/bench_kernels.py for a speed comparison.

Only elementwise maps and a max-reduction live here, so results are
reproducible run-to-run for any thread count: the FFTs stay in scipy and
all accumulating sums stay in numpy.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("Q1DNLS_NO_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag not in ("", "0", "false")

try:
    from numba import njit, prange

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not NUMBA_DISABLED


def _rotate_nonlinear_numpy(u: np.ndarray, dt: float) -> None:
    """In-place u *= exp(2i |u|^2 dt) on a flat complex128 array."""
    a2 = u.real * u.real + u.imag * u.imag
    u *= np.exp((2j * dt) * a2)


def _multiply_inplace_numpy(u: np.ndarray, phase: np.ndarray) -> None:
    u *= phase


def _max_abs2_numpy(u: np.ndarray) -> float:
    return float(np.max(u.real * u.real + u.imag * u.imag))


if NUMBA_AVAILABLE:

    @njit(parallel=True, cache=True)
    def _rotate_nonlinear_numba(u, dt):  # pragma: no cover - compiled
        for i in prange(u.size):
            v = u[i]
            a2 = v.real * v.real + v.imag * v.imag
            th = 2.0 * dt * a2
            u[i] = v * complex(np.cos(th), np.sin(th))

    @njit(parallel=True, cache=True)
    def _multiply_inplace_numba(u, phase):  # pragma: no cover - compiled
        for i in prange(u.size):
            u[i] = u[i] * phase[i]

    @njit(parallel=True, cache=True)
    def _max_abs2_numba(u):  # pragma: no cover - compiled
        m = 0.0
        for i in prange(u.size):
            v = u[i]
            m = max(m, v.real * v.real + v.imag * v.imag)
        return m


def _flat(u: np.ndarray) -> np.ndarray:
    if not u.flags["C_CONTIGUOUS"]:
        raise ValueError("kernel input must be C-contiguous")
    return u.reshape(-1)


def rotate_nonlinear(u: np.ndarray, dt: float) -> None:
    """Exact nonlinear substep u <- u * exp(2i |u|^2 dt), in place.

    A pointwise unitary rotation: |u| is unchanged at every lattice point.
    """
    flat = _flat(u)
    if USE_NUMBA:
        _rotate_nonlinear_numba(flat, float(dt))
    else:
        _rotate_nonlinear_numpy(flat, float(dt))


def multiply_inplace(u: np.ndarray, phase: np.ndarray) -> None:
    """In-place elementwise multiply (spectral propagator application)."""
    if phase.shape != u.shape:
        raise ValueError("phase table shape mismatch")
    if USE_NUMBA:
        _multiply_inplace_numba(_flat(u), phase.reshape(-1))
    else:
        _multiply_inplace_numpy(u, phase)


def max_abs2(u: np.ndarray) -> float:
    """max over the lattice of |u|^2 (exact reduction, order independent)."""
    flat = _flat(u)
    if USE_NUMBA:
        return float(_max_abs2_numba(flat))
    return _max_abs2_numpy(flat)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
