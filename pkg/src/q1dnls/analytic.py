"""Closed-form solutions: Akhmediev breather, Peregrine instanton, and their
quasi-1D adiabatic deformations.

The breather is evaluated in a rescaled form (dividing numerator and
denominator by cosh of the real argument) so that tanh/sech saturate instead
of cosh overflowing; this keeps evaluation finite for arbitrarily large
|t - t1| such as the far tails of strongly localized envelopes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "BreatherParams",
    "Q1DProfiles",
    "PeregrineQ1DParams",
    "growth_rate",
    "akhmediev",
    "akhmediev_dt",
    "peregrine",
    "q1d_breather",
    "fission_product_sech",
    "fission_product_gauss",
    "peregrine_q1d",
    "peregrine_limit_check",
]



def _scalar_or_array(out):
    out = np.asarray(out)
    if out.ndim == 0:
        return out[()].item()
    return out

def growth_rate(k):
    """Modulation-instability growth rate sigma(k) = k*sqrt(4 - k^2)."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 0) or np.any(k > 2):
        raise ValueError("growth rate defined for 0 <= k <= 2 only")
    return _scalar_or_array(k * np.sqrt(4.0 - k * k))


def _sech(a):
    # 2 e^{-|a|} / (1 + e^{-2|a|}): never overflows, exact for small a too
    e = np.exp(-np.abs(a))
    return 2.0 * e / (1.0 + e * e)


@dataclass(frozen=True)
class BreatherParams:
    """Akhmediev breather parameterized by phi in (0, pi/2).

    k = 2 cos(phi) and sigma = 2 sin(2 phi) = k sqrt(4 - k^2) are derived,
    never stored independently, so the triple stays consistent.
    """

    phi: float
    x_shift: float = 0.0
    t_shift: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.phi < np.pi / 2:
            raise ValueError(f"phi must lie in (0, pi/2), got {self.phi}")

    @property
    def k(self) -> float:
        return 2.0 * np.cos(self.phi)

    @property
    def sigma(self) -> float:
        return 2.0 * np.sin(2.0 * self.phi)

    @classmethod
    def from_k(cls, k: float, x_shift: float = 0.0, t_shift: float = 0.0):
        if not 0.0 < k < 2.0:
            raise ValueError(f"carrier wavenumber must lie in (0, 2), got {k}")
        return cls(float(np.arccos(k / 2.0)), x_shift, t_shift)


def _breather_core(kx_arg, tau, phi):
    """A(x, tau, phi) with kx_arg = k*x and tau = sigma*t (rescaled form)."""
    s = np.sin(phi)
    c2, s2 = np.cos(2 * phi), np.sin(2 * phi)
    th = np.tanh(tau)
    sc = _sech(tau)
    cosx = np.cos(kx_arg)
    num = c2 + 1j * s2 * th + s * cosx * sc
    den = 1.0 - s * cosx * sc
    return num / den


def akhmediev(x, t, p: BreatherParams):
    """The breather envelope A(x - x_shift, t - t_shift, phi).

    Periodic in x with period 2*pi/k, |A| -> 1 as |t| -> infinity; the full
    NLS solution is exp(2it) * A.
    """
    x = np.asarray(x, dtype=float) - p.x_shift
    t = np.asarray(t, dtype=float) - p.t_shift
    out = _breather_core(p.k * x, p.sigma * t, p.phi)
    return _scalar_or_array(out)


def akhmediev_dt(x, t, p: BreatherParams):
    """Exact t-derivative of the breather envelope (for residual checks)."""
    x = np.asarray(x, dtype=float) - p.x_shift
    t = np.asarray(t, dtype=float) - p.t_shift
    s = np.sin(p.phi)
    sg = p.sigma
    tau = sg * t
    # d/dt of (cosh(tau+2i phi)+s cos kx)/(cosh tau - s cos kx), rescaled by
    # cosh(tau): N = cos2phi + i sin2phi tanh + s cos kx sech,
    #            D = 1 - s cos kx sech
    th = np.tanh(tau)
    sc = _sech(tau)
    cosx = np.cos(p.k * x)
    num = np.cos(2 * p.phi) + 1j * np.sin(2 * p.phi) * th + s * cosx * sc
    den = 1.0 - s * cosx * sc
    dnum = sg * (1j * np.sin(2 * p.phi) * sc * sc - s * cosx * sc * th)
    dden = sg * s * cosx * sc * th
    out = (dnum * den - num * dden) / (den * den)
    return _scalar_or_array(out)


def peregrine(x, t, x0: float = 0.0, t0: float = 0.0):
    """Peregrine envelope P(x - x0, t - t0) = 1 - (4 + 16it)/(1 + 4x^2 + 16t^2)."""
    x = np.asarray(x, dtype=float) - x0
    t = np.asarray(t, dtype=float) - t0
    out = 1.0 - (4.0 + 16j * t) / (1.0 + 4.0 * x * x + 16.0 * t * t)
    return _scalar_or_array(out)


@dataclass
class Q1DProfiles:
    """Sampled appearance profiles x1(.) and t1(.) of the slow coordinate.

    kind "planar" means the slow coordinate is Y; "radial" means
    R = sqrt(Y^2 + Z^2) >= 0. Evaluation between samples uses a cubic
    spline (profiles are smooth by construction). Samples where the
    profile is undefined (vanishing unstable amplitude) carry t1 = +inf
    and are excluded from the spline; queries there return the capped
    value T1_CAP, far beyond any simulated window.
    """

    s: np.ndarray
    x1: np.ndarray
    t1: np.ndarray
    phi: float
    kind: Literal["planar", "radial"] = "planar"

    T1_CAP = 1e6

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        self.x1 = np.asarray(self.x1, dtype=float)
        self.t1 = np.asarray(self.t1, dtype=float)
        if not (self.s.ndim == 1 and self.s.size >= 4):
            raise ValueError("need at least 4 profile samples")
        if np.any(np.diff(self.s) <= 0):
            raise ValueError("profile samples must be strictly increasing in s")
        if self.kind == "radial" and self.s[0] < 0:
            raise ValueError("radial profiles are functions of R >= 0")
        finite = np.isfinite(self.t1)
        self._defined = finite
        if finite.sum() >= 4:
            self._x1_spline = CubicSpline(self.s[finite], self.x1[finite])
            self._t1_spline = CubicSpline(self.s[finite], self.t1[finite])
        else:
            self._x1_spline = None
            self._t1_spline = None

    @property
    def t_min(self) -> float:
        """Minimum of t1: the predicted first-appearance (fission) time."""
        return float(np.min(self.t1[self._defined]))

    def _check_range(self, s):
        if np.any(s < self.s[0] - 1e-9) or np.any(s > self.s[-1] + 1e-9):
            raise ValueError(
                f"slow coordinate outside sampled range [{self.s[0]}, {self.s[-1]}]"
            )

    def x1_of(self, s):
        s = np.asarray(s, dtype=float)
        self._check_range(s)
        if self._x1_spline is None:
            raise ValueError("profile undefined everywhere (no-growth datum)")
        out = self._x1_spline(s)
        return _scalar_or_array(out)

    def t1_of(self, s):
        s = np.asarray(s, dtype=float)
        self._check_range(s)
        if self._t1_spline is None:
            raise ValueError("profile undefined everywhere (no-growth datum)")
        out = np.minimum(self._t1_spline(s), self.T1_CAP)
        if not np.all(self._defined):
            # anything between two undefined samples is itself undefined
            bad = np.interp(s, self.s, (~self._defined).astype(float)) > 0.999
            out = np.where(bad, self.T1_CAP, out)
        return _scalar_or_array(out)

    @classmethod
    def constant(cls, phi, x10, t0, s_max=10.0, kind="planar", n=64):
        s0 = 0.0 if kind == "radial" else -s_max
        s = np.linspace(s0, s_max, n)
        return cls(s, np.full(n, float(x10)), np.full(n, float(t0)), phi, kind)


def q1d_breather(x, s, t, prof: Q1DProfiles):
    """Adiabatic breather deformation
    A(x - x1(s), t - t1(s), phi) * exp(2it + 2i*phi).

    At fixed slow coordinate s this is an exact breather in (x, t)
    translated by (x1(s), t1(s)); the modulus maximum 1 + 2 sin(phi) is
    reached on the curves x = x1(s), t = t1(s).
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    k = 2.0 * np.cos(prof.phi)
    sigma = 2.0 * np.sin(2.0 * prof.phi)
    x1 = prof.x1_of(s)
    t1 = prof.t1_of(s)
    core = _breather_core(k * (x - x1), sigma * (t - t1), prof.phi)
    out = core * np.exp(2j * t + 2j * prof.phi)
    return _scalar_or_array(out)


def _product_core(A, kx_arg, phi, sign):
    """Separated-product ratio with real cosh argument A and x-phase kx_arg."""
    s = np.sin(phi)
    th = np.tanh(A)
    sc = _sech(A)
    cosx = np.cos(kx_arg)
    num = np.cos(2 * phi) - sign * 1j * np.sin(2 * phi) * th + s * cosx * sc
    den = 1.0 - s * cosx * sc
    return num / den


def fission_product_sech(x, Y, t, phi, x10, t0, d=0.0, sign=+1):
    """Leading-order fission product of the sech envelope for t - t0 >> 1.

    The product travels with constant speed sign*sigma along Y holding its
    shape; for d = 0 it stays on the line x = x10.
    """
    if sign not in (+1, -1):
        raise ValueError("sign selector must be +1 or -1")
    x = np.asarray(x, dtype=float)
    Y = np.asarray(Y, dtype=float)
    t = np.asarray(t, dtype=float)
    k = 2.0 * np.cos(phi)
    sigma = 2.0 * np.sin(2.0 * phi)
    A = Y - sign * (sigma * (t - t0) + np.log(2.0))
    kx_arg = k * (x - x10) - d * Y * Y
    out = _product_core(A, kx_arg, phi, sign) * np.exp(2j * t + 2j * phi)
    return _scalar_or_array(out)


def fission_product_gauss(x, Y, t, phi, x10, t0, d=0.0, sign=+1):
    """Leading-order fission product of the Gaussian envelope for t - t0 >> 1.

    Peak at Y = sign*sqrt(sigma*(t - t0)); speed and Y-width both shrink
    like (t - t0)^{-1/2}.
    """
    if sign not in (+1, -1):
        raise ValueError("sign selector must be +1 or -1")
    t = np.asarray(t, dtype=float)
    if np.any(t <= t0):
        raise ValueError("gaussian product defined for t > t0 only")
    x = np.asarray(x, dtype=float)
    Y = np.asarray(Y, dtype=float)
    k = 2.0 * np.cos(phi)
    sigma = 2.0 * np.sin(2.0 * phi)
    root = np.sqrt(sigma * (t - t0))
    xi = Y - sign * root
    A = 2.0 * root * xi
    kx_arg = k * (x - x10 - d * Y * Y)
    out = _product_core(A, kx_arg, phi, sign) * np.exp(2j * t + 2j * phi)
    return _scalar_or_array(out)


@dataclass(frozen=True)
class PeregrineQ1DParams:
    """Long-wave (Peregrine) deformation parameters.

    The slow coordinate passed to peregrine_q1d is already the scaled one,
    y1 = delta^{3/2} y in the planar case or r1 = delta^{3/2} sqrt(y^2+z^2)
    radially; delta is kept for converting from lattice coordinates.
    """

    x0: float = 0.0
    t0: float = 0.0
    a: float = 1.0
    d: float = 0.0
    delta: float = 1e-2
    kind: Literal["planar", "radial"] = "planar"

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("quadratic time-delay coefficient a must be positive")
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def slow_of_lattice(self, y, z=None):
        if self.kind == "radial":
            if z is None:
                raise ValueError("radial kind needs both y and z")
            return self.delta**1.5 * np.hypot(y, z)
        return self.delta**1.5 * np.asarray(y, dtype=float)


def peregrine_q1d(x, slow, t, p: PeregrineQ1DParams):
    """Deformed Peregrine exp(2it) * P(x - x0 - d*slow^2, t - t0 - a*slow^2).

    Maximum modulus 3 is attained where x = x0 + d*slow^2 and
    t = t0 + a*slow^2; after the first appearance the crest (planar pair /
    radial ring) sits at slow = sqrt((t - t0)/a).
    """
    slow = np.asarray(slow, dtype=float)
    s2 = slow * slow
    out = peregrine(
        np.asarray(x, dtype=float) - p.d * s2,
        np.asarray(t, dtype=float) - p.a * s2,
        p.x0,
        p.t0,
    ) * np.exp(2j * np.asarray(t, dtype=float))
    return _scalar_or_array(out)


def peregrine_limit_check(phi, x_half=1.0, t_half=1.0, n=201):
    """Sup over the window |x|<=x_half, |t|<=t_half of
    |A(x,t,phi)*exp(2i*phi) - P(x,t)|.

    Measures how well the breather approaches its long-wave limit; decays
    to zero as phi -> pi/2. phi = pi/2 itself is rejected (k = 0, the
    breather degenerates).
    """
    if not 0.0 < phi < np.pi / 2:
        raise ValueError("phi must lie strictly inside (0, pi/2)")
    p = BreatherParams(phi)
    x = np.linspace(-x_half, x_half, n)
    t = np.linspace(-t_half, t_half, n)
    X, T = np.meshgrid(x, t, indexing="ij")
    diff = akhmediev(X, T, p) * np.exp(2j * phi) - peregrine(X, T)
    return float(np.max(np.abs(diff)))
