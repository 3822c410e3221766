"""Discretized Cauchy data: background plus slowly modulated unstable mode.

Envelopes are evaluated exactly at lattice points (no band limiting): the
recommended grids keep them spectrally narrow, so implicit aliasing stays
below 1e-12. Localized envelopes must decay below 1e-8 at the transverse
box edge; radial builds reject data that would wrap around the periodic
boundary.
"""

from __future__ import annotations

import warnings

import numpy as np

from .core import ComplexField, PeriodicGrid
from .mae import CauchyData

__all__ = ["build_planar", "build_radial", "build_doubly_periodic"]

_EDGE_DECAY = 1e-8
_LOCALIZED = ("sech", "gaussian", "double_hump")


def _check_x_axis(data: CauchyData, grid: PeriodicGrid):
    if abs(grid.lengths[0] - data.Lx) > 1e-9 * data.Lx:
        raise ValueError(
            f"grid x-length {grid.lengths[0]} != datum Lx {data.Lx}"
        )


def _mode_profiles(data: CauchyData, slow: np.ndarray):
    env = data.envelope
    f = env.f(slow)
    g = env.g(slow)
    cp = data.c0_plus * f * np.exp(-1j * g)
    cm = data.c0_minus * f * np.exp(1j * g)
    return cp, cm


def _stable_part(data: CauchyData, x: np.ndarray):
    w = np.zeros_like(x, dtype=complex)
    for n, cp, cm in data.stable_modes:
        w += cp * np.exp(1j * n * data.kx * x) + cm * np.exp(-1j * n * data.kx * x)
    return w


def build_planar(data: CauchyData, grid: PeriodicGrid) -> ComplexField:
    """2-axis datum u = 1 + eps [c+(Y) e^{i kx x} + c-(Y) e^{-i kx x} + ...],
    Y = delta * y."""
    if grid.dim != 2:
        raise ValueError("planar build needs a 2-axis grid")
    _check_x_axis(data, grid)
    env = data.envelope
    Y_half = data.delta * grid.lengths[1] / 2
    if env.family == "cosine":
        periods = data.delta * grid.lengths[1] / env.L_Y
        if abs(periods - round(periods)) > 1e-9 or round(periods) < 1:
            raise ValueError(
                f"grid y-length spans {periods:.6g} envelope periods; an integer "
                "number is required for periodicity"
            )
    elif env.family in _LOCALIZED and env.f(Y_half) >= _EDGE_DECAY:
        warnings.warn(
            f"envelope f at the box edge is {env.f(Y_half):.2e} >= {_EDGE_DECAY}; "
            "periodic images will not be negligible",
            stacklevel=2,
        )
    x = grid.coords[0][:, None]
    Y = data.delta * grid.coords[1][None, :]
    cp, cm = _mode_profiles(data, Y)
    u = 1.0 + data.epsilon * (
        cp * np.exp(1j * data.kx * x)
        + cm * np.exp(-1j * data.kx * x)
        + _stable_part(data, x)
    )
    return ComplexField(grid, np.broadcast_to(u, grid.shape), 0.0)


def build_radial(data: CauchyData, grid: PeriodicGrid) -> ComplexField:
    """3-axis datum with envelope evaluated at R = delta*sqrt(y^2 + z^2).

    Rejected when the envelope has not decayed below 1e-8 at the nearest
    transverse box edge (it would alias across the periodic wrap)."""
    if grid.dim != 3:
        raise ValueError("radial build needs a 3-axis grid")
    _check_x_axis(data, grid)
    env = data.envelope
    R_edge = data.delta * min(grid.lengths[1], grid.lengths[2]) / 2
    if env.f(R_edge) >= _EDGE_DECAY:
        raise ValueError(
            f"envelope f(R) = {env.f(R_edge):.2e} at the box edge (R = {R_edge:.3g}); "
            f"must be below {_EDGE_DECAY} for a radial datum"
        )
    x = grid.coords[0][:, None, None]
    R = data.delta * np.hypot(grid.coords[1][:, None], grid.coords[2][None, :])
    cp, cm = _mode_profiles(data, R)
    u = 1.0 + data.epsilon * (
        cp[None, :, :] * np.exp(1j * data.kx * x)
        + cm[None, :, :] * np.exp(-1j * data.kx * x)
        + _stable_part(data, x)
    )
    return ComplexField(grid, u, 0.0)


def build_doubly_periodic(
    epsilon: float, kx: float, ky: float, grid: PeriodicGrid
) -> ComplexField:
    """Genericity-scan datum 1 + eps e^{i phi} cos(kx x) cos(ky y) with
    phi = arccos(sqrt(kx^2 - ky^2)/2).

    Outside the hyperbolic MI domain 0 < kx^2 - ky^2 < 4 the datum is still
    constructible (phi from the clamped argument) but a warning notes that
    no growth is expected."""
    if grid.dim != 2:
        raise ValueError("doubly periodic build needs a 2-axis grid")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    for axis, k in ((0, kx), (1, ky)):
        ratio = grid.lengths[axis] * k / (2 * np.pi)
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError(
                f"axis {axis}: length {grid.lengths[axis]} is not an integer "
                f"number of 2*pi/k periods for k={k}"
            )
    s = kx * kx - ky * ky
    if not 0.0 < s < 4.0:
        warnings.warn(
            f"kx^2 - ky^2 = {s:.4g} outside the MI domain (0, 4): no growth expected",
            stacklevel=2,
        )
    phi = float(np.arccos(np.sqrt(min(max(s, 0.0), 4.0)) / 2))
    x = grid.coords[0][:, None]
    y = grid.coords[1][None, :]
    u = 1.0 + epsilon * np.exp(1j * phi) * np.cos(kx * x) * np.cos(ky * y)
    return ComplexField(grid, u, 0.0)
