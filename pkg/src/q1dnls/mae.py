"""Matched-asymptotics predictor: from Cauchy data to the appearance
profiles t1(Y), x1(Y) and the full fission/fusion event story.

The linear modulation-instability stage fixes, per slow coordinate, a
growing and a decaying mode with coefficients

    alpha(Y) = e^{-i phi} c+*(Y) - e^{i phi} c-(Y)
    beta(Y)  = e^{i phi} c-*(Y) - e^{-i phi} c+(Y)

and matching the growing branch onto a translated Akhmediev breather gives
the local appearance time t1(Y) = (1/sigma) log(sigma^2 / (2 eps |alpha(Y)|))
and crest line x1(Y) = (arg alpha(Y) + pi/2) / kx. Everything predicted here
(fission at minima of t1, fusion at interior maxima, square-root separation
laws) follows from the shape of t1 alone.

The linear-stage coefficient phase phi_1 is taken equal to
phi = arccos(kx/2); predictions carry a metadata flag recording that choice.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy.interpolate import CubicSpline

from .analytic import Q1DProfiles, _scalar_or_array, growth_rate

__all__ = [
    "EnvelopeSpec",
    "CauchyData",
    "MAEPrediction",
    "Event",
    "Trajectory",
    "NoGrowthError",
    "alpha_beta",
    "appearance_profiles",
    "predict_events",
    "linear_stage",
    "curvature_flip_prediction",
]


class NoGrowthError(ValueError):
    """The datum excites only the decaying mode; no appearance time exists."""


@dataclass(frozen=True)
class EnvelopeSpec:
    """Slow envelope f(Y) and chirp g(Y) = d*Y^2 of the mode coefficients.

    Families:
      cosine      f = (1 + gamma*cos(2*pi*Y/L_Y)) / (1 + gamma)
      sech        f = 1/cosh(Y)
      gaussian    f = exp(-Y^2)
      double_hump f = (Y^2 + 1 - y_m^2) * exp(y_m^2 - Y^2), maxima at +-y_m
      tabulated   cubic splines through (samples_s, samples_f, samples_g)

    f is normalized so 0 < f <= 1 with max f = 1, and f, g are even.
    """

    family: str = "gaussian"
    gamma: float = 0.3
    L_Y: float = 10.0
    d: float = 0.0
    y_m: float = 0.8
    samples_s: tuple[float, ...] | None = None
    samples_f: tuple[float, ...] | None = None
    samples_g: tuple[float, ...] | None = None

    _FAMILIES = ("cosine", "sech", "gaussian", "double_hump", "tabulated")

    def __post_init__(self):
        if self.family not in self._FAMILIES:
            raise ValueError(f"unknown envelope family {self.family!r}")
        if self.family == "cosine":
            if not 0.0 < self.gamma < 1.0:
                raise ValueError("cosine envelope needs 0 < gamma < 1")
            if self.L_Y <= 0:
                raise ValueError("cosine envelope needs L_Y > 0")
        if self.family == "double_hump" and not 0.0 < self.y_m < 1.0:
            raise ValueError("double_hump hump position y_m must lie in (0, 1)")
        if self.family == "tabulated":
            s = np.asarray(self.samples_s, dtype=float)
            f = np.asarray(self.samples_f, dtype=float)
            if s.ndim != 1 or s.size < 8 or f.shape != s.shape:
                raise ValueError("tabulated envelope needs >= 8 (s, f) samples")
            if np.any(np.diff(s) <= 0):
                raise ValueError("tabulated samples must be increasing in s")
            if np.any(f < 0) or np.max(f) > 1 + 1e-9 or abs(np.max(f) - 1) > 1e-6:
                raise ValueError("tabulated f must satisfy 0 <= f <= 1, max f = 1")

    def _spline(self, which):
        s = np.asarray(self.samples_s, dtype=float)
        v = np.asarray(
            self.samples_f if which == "f" else self.samples_g, dtype=float
        )
        if which == "g" and self.samples_g is None:
            v = np.zeros_like(s)
        return CubicSpline(s, v)

    def f(self, Y):
        Y = np.asarray(Y, dtype=float)
        if self.family == "cosine":
            out = (1 + self.gamma * np.cos(2 * np.pi * Y / self.L_Y)) / (1 + self.gamma)
        elif self.family == "sech":
            e = np.exp(-np.abs(Y))
            out = 2.0 * e / (1.0 + e * e)
        elif self.family == "gaussian":
            out = np.exp(-Y * Y)
        elif self.family == "double_hump":
            c = 1.0 - self.y_m**2
            out = (Y * Y + c) * np.exp(self.y_m**2 - Y * Y)
        else:
            out = np.clip(self._spline("f")(Y), 0.0, 1.0)
        return _scalar_or_array(out)

    def g(self, Y):
        Y = np.asarray(Y, dtype=float)
        if self.family == "tabulated" and self.samples_g is not None:
            out = self._spline("g")(Y)
        else:
            out = self.d * Y * Y
        return _scalar_or_array(out)

    def fpp(self, Y):
        """Second derivative of f; tabulated envelopes use the spline."""
        Y = np.asarray(Y, dtype=float)
        if self.family == "cosine":
            kY = 2 * np.pi / self.L_Y
            out = -self.gamma * kY * kY * np.cos(kY * Y) / (1 + self.gamma)
        elif self.family == "sech":
            f = self.f(Y)
            out = f - 2 * f**3  # d^2/dY^2 sech = sech - 2 sech^3
        elif self.family == "gaussian":
            out = (4 * Y * Y - 2) * np.exp(-Y * Y)
        elif self.family == "double_hump":
            ym2 = self.y_m**2
            out = np.exp(ym2 - Y * Y) * (
                2.0 * ym2 - (6.0 + 4.0 * ym2) * Y**2 + 4.0 * Y**4
            )
        else:
            out = self._spline("f")(Y, 2)
        return _scalar_or_array(out)

    def fpp_at_extremum(self, Y0, half_step=0.05):
        """f'' at an extremum by a quadratic fit over 5 nearby samples."""
        if self.family != "tabulated":
            return float(self.fpp(Y0))
        s = np.asarray(self.samples_s, dtype=float)
        i = int(np.argmin(np.abs(s - Y0)))
        lo, hi = max(0, i - 2), min(s.size, i + 3)
        ss = s[lo:hi]
        ff = np.asarray(self.samples_f, dtype=float)[lo:hi]
        coeff = np.polyfit(ss - Y0, ff, 2)
        return float(2.0 * coeff[0])

    def default_halfwidth(self) -> float:
        if self.family == "cosine":
            return self.L_Y
        if self.family == "sech":
            return 12.0
        if self.family == "gaussian":
            return 5.0
        if self.family == "double_hump":
            return self.y_m + 5.0
        s = np.asarray(self.samples_s, dtype=float)
        return float(min(abs(s[0]), abs(s[-1])))


@dataclass(frozen=True)
class CauchyData:
    """Background-plus-single-unstable-mode initial condition.

    u(x, Y, 0) = 1 + eps [c0p f(Y) e^{-i g(Y)} e^{i kx x}
                          + c0m f(Y) e^{+i g(Y)} e^{-i kx x} + stable part],
    with kx = 2*pi/Lx the single unstable mode (pi < Lx < 2*pi) and
    Y = delta*y (or R = delta*sqrt(y^2+z^2) for radial data).

    stable_modes holds optional (n, c_plus, c_minus) triples for harmonics
    n >= 2, uniform in Y; they only contribute O(eps) oscillations.
    """

    epsilon: float
    delta: float
    Lx: float
    c0_plus: complex
    c0_minus: complex
    envelope: EnvelopeSpec = dataclass_field(default_factory=EnvelopeSpec)
    stable_modes: tuple[tuple[int, complex, complex], ...] = ()
    kind: str = "planar"
    slow_halfwidth: float | None = None

    def __post_init__(self):
        if self.epsilon < 0 or self.delta <= 0:
            raise ValueError("epsilon must be >= 0 and delta positive")
        if not np.pi < self.Lx < 2 * np.pi:
            raise ValueError(
                f"Lx={self.Lx} outside (pi, 2*pi): need exactly one unstable mode"
            )
        if self.kind not in ("planar", "radial"):
            raise ValueError("kind must be 'planar' or 'radial'")
        for n, _, _ in self.stable_modes:
            if n < 2:
                raise ValueError("stable modes are harmonics n >= 2")
        if self.epsilon > 0 and math.log(1.0 / self.epsilon) > 0.5 / self.delta:
            warnings.warn(
                "MI time scale ln(1/eps) is not small against the Q1D scale "
                "1/delta; the first-appearance description may degrade",
                stacklevel=2,
            )

    @property
    def kx(self) -> float:
        return 2 * np.pi / self.Lx

    @property
    def phi(self) -> float:
        return float(np.arccos(self.kx / 2))

    @property
    def sigma(self) -> float:
        return growth_rate(self.kx)

    def c_plus(self, Y):
        return self.c0_plus * self.envelope.f(Y) * np.exp(-1j * self.envelope.g(Y))

    def c_minus(self, Y):
        return self.c0_minus * self.envelope.f(Y) * np.exp(1j * self.envelope.g(Y))

    def halfwidth(self) -> float:
        return (
            self.slow_halfwidth
            if self.slow_halfwidth is not None
            else self.envelope.default_halfwidth()
        )


@dataclass
class Event:
    """A predicted or detected crest event in the slow direction."""

    kind: str  # fission | fusion | first-appearance-max
    time: float
    x: float
    slow: float
    multiplicity: int = 1
    confidence: str = "high"

    def to_dict(self):
        return {
            "kind": self.kind,
            "time": self.time,
            "x": self.x,
            "slow": self.slow,
            "multiplicity": self.multiplicity,
            "confidence": self.confidence,
        }


@dataclass
class Trajectory:
    """Sampled crest trajectory branch emanating from an origin event.

    samples is an (n, 2) array of (t, slow position); speed_exponent is the
    near-origin power of the speed law (-1/2 for the square-root laws).
    """

    kind: str  # sqrt-law | sech-law | constant-speed | ring-radius
    origin: Event
    samples: np.ndarray
    speed_exponent: float = -0.5
    asymptotic_speed: float | None = None

    def to_dict(self):
        return {
            "kind": self.kind,
            "origin": self.origin.to_dict(),
            "samples": np.asarray(self.samples).tolist(),
            "speed_exponent": self.speed_exponent,
            "asymptotic_speed": self.asymptotic_speed,
        }


@dataclass
class MAEPrediction:
    """Full matched-asymptotics output for one Cauchy datum."""

    phi: float
    sigma: float
    alpha0: complex
    beta0: complex
    t0: float
    x10: float
    profiles: Q1DProfiles
    events: list[Event]
    trajectories: list[Trajectory]
    diagnostic: str = ""
    phi1_equals_phi: bool = True

    def to_dict(self):
        return {
            "phi": self.phi,
            "sigma": self.sigma,
            "k_x": 2 * np.cos(self.phi),
            "alpha0": [self.alpha0.real, self.alpha0.imag],
            "beta0": [self.beta0.real, self.beta0.imag],
            "t0": self.t0,
            "x10": self.x10,
            "events": [e.to_dict() for e in self.events],
            "trajectories": [tr.to_dict() for tr in self.trajectories],
            "profiles": {
                "kind": self.profiles.kind,
                "s": self.profiles.s.tolist(),
                "x1": self.profiles.x1.tolist(),
                "t1": np.where(
                    np.isfinite(self.profiles.t1), self.profiles.t1, 1e306
                ).tolist(),
            },
            "diagnostic": self.diagnostic,
            "phi1_equals_phi": self.phi1_equals_phi,
        }


def _alpha0_beta0(data: CauchyData):
    ephi = np.exp(1j * data.phi)
    alpha0 = np.conj(data.c0_plus) / ephi - data.c0_minus * ephi
    beta0 = np.conj(data.c0_minus) * ephi - data.c0_plus / ephi
    return complex(alpha0), complex(beta0)


def alpha_beta(data: CauchyData):
    """Growing/decaying mode coefficients alpha(Y), beta(Y) as callables.

    Raises NoGrowthError when |alpha0| vanishes: such a datum excites only
    the decaying mode and has no predicted appearance.
    """
    alpha0, beta0 = _alpha0_beta0(data)
    if abs(alpha0) == 0.0:
        raise NoGrowthError(
            "alpha0 = 0: datum excites only the decaying mode (no-growth datum)"
        )
    ephi = np.exp(1j * data.phi)

    def alpha(Y):
        return np.conj(data.c_plus(Y)) / ephi - data.c_minus(Y) * ephi

    def beta(Y):
        return np.conj(data.c_minus(Y)) * ephi - data.c_plus(Y) / ephi

    return alpha, beta


def appearance_profiles(data: CauchyData, n_samples: int = 2049) -> Q1DProfiles:
    """Sampled appearance profiles over the slow domain.

    t1(Y) = (1/sigma) log(sigma^2 / (2 eps |alpha(Y)|)) and
    x1(Y) = (arg alpha(Y) + pi/2) / kx, with the restricted-family phase
    arg alpha0 + g(Y) kept unwrapped so the profile stays smooth. Points
    with |alpha| = 0 are marked undefined (t1 = +inf).
    """
    alpha0, _ = _alpha0_beta0(data)
    if abs(alpha0) == 0.0 or data.epsilon == 0.0:
        raise NoGrowthError(
            "alpha0 = 0: datum excites only the decaying mode (no-growth datum)"
            if data.epsilon > 0
            else "epsilon = 0: unperturbed background (no-growth datum)"
        )
    W = data.halfwidth()
    if data.kind == "radial":
        s = np.linspace(0.0, W, n_samples)
    else:
        s = np.linspace(-W, W, n_samples)
    sigma = data.sigma
    f = data.envelope.f(s)
    mod = np.abs(alpha0) * f
    with np.errstate(divide="ignore"):
        t1 = np.where(
            mod > 0.0, np.log(sigma * sigma / (2 * data.epsilon * mod)) / sigma, np.inf
        )
    x1 = (np.angle(alpha0) + data.envelope.g(s) + np.pi / 2) / data.kx
    return Q1DProfiles(s, x1, t1, data.phi, kind=data.kind)


def _critical_points(data: CauchyData, prof: Q1DProfiles):
    """(minima, maxima) of t1 inside the sampled slow domain.

    Analytic families use their known critical sets; tabulated envelopes
    are scanned numerically on the profile samples.
    """
    env = data.envelope
    W = data.halfwidth()
    if data.kind == "radial":
        return [0.0], []
    if env.family == "cosine":
        n_max = int(np.floor(W / env.L_Y + 1e-9))
        minima = [n * env.L_Y for n in range(-n_max, n_max + 1)]
        maxima = [
            (n + 0.5) * env.L_Y
            for n in range(-n_max - 1, n_max + 1)
            if abs((n + 0.5) * env.L_Y) <= W
        ]
        return minima, maxima
    if env.family in ("sech", "gaussian"):
        return [0.0], []
    if env.family == "double_hump":
        return [-env.y_m, env.y_m], [0.0]
    # tabulated: numeric scan for interior extrema of t1
    t1 = prof.t1
    s = prof.s
    finite = np.isfinite(t1)
    minima, maxima = [], []
    for i in range(1, s.size - 1):
        if not (finite[i - 1] and finite[i] and finite[i + 1]):
            continue
        if t1[i] < t1[i - 1] and t1[i] < t1[i + 1]:
            minima.append(float(s[i]))
        elif t1[i] > t1[i - 1] and t1[i] > t1[i + 1]:
            maxima.append(float(s[i]))
    return minima, maxima


def _branch_samples(prof: Q1DProfiles, s_from, s_to, n=96):
    """Exact level-set samples (t1(s), s) walking from s_from towards s_to."""
    ss = np.linspace(s_from, s_to, n + 1)[1:]
    tt = prof.t1_of(ss)
    good = tt < Q1DProfiles.T1_CAP * 0.5
    return np.column_stack([tt[good], ss[good]])


def predict_events(data: CauchyData, n_samples: int = 2049) -> MAEPrediction:
    """Event list and trajectories implied by the appearance profiles.

    Fission happens at every local minimum of t1 (the crest's transverse
    curvature flips there); fusion at every interior local maximum of t1
    reached by counter-propagating products. Fusion times use the general
    t1 formula, i.e. t1(Y_max) = t0 + (1/sigma) ln(1/f(Y_max)).
    """
    prof = appearance_profiles(data, n_samples)
    alpha0, beta0 = _alpha0_beta0(data)
    sigma = data.sigma
    t0 = float(np.log(sigma * sigma / (2 * data.epsilon * abs(alpha0))) / sigma)
    x10 = float((np.angle(alpha0) + np.pi / 2) / data.kx)
    env = data.envelope
    minima, maxima = _critical_points(data, prof)

    events: list[Event] = []
    trajectories: list[Trajectory] = []
    diagnostic = ""
    if not minima:
        diagnostic = "t1 has no interior minimum: no event predicted"
    else:
        s_gl = min(minima, key=lambda s: prof.t1_of(s))
        events.append(
            Event(
                "first-appearance-max",
                float(prof.t1_of(s_gl)),
                float(prof.x1_of(s_gl)),
                float(s_gl),
            )
        )
        fission_events = []
        for s_min in minima:
            ev = Event(
                "fission",
                float(prof.t1_of(s_min)),
                float(prof.x1_of(s_min)),
                float(s_min),
                multiplicity=len(minima),
            )
            fission_events.append(ev)
            events.append(ev)
        fusion_events = []
        for s_max in maxima:
            t_fus = float(prof.t1_of(s_max))
            if not np.isfinite(t_fus) or t_fus >= Q1DProfiles.T1_CAP * 0.5:
                continue
            left = [s for s in minima if s < s_max]
            right = [s for s in minima if s > s_max]
            if not left or not right:
                continue  # products only approach from one side: no fusion
            ev = Event(
                "fusion", t_fus, float(prof.x1_of(s_max)), float(s_max),
                multiplicity=max(1, len(maxima)),
            )
            fusion_events.append(ev)
            events.append(ev)
        for ev in fusion_events:
            for fi in fission_events:
                if ev.time <= fi.time + 1e-12:
                    raise AssertionError(
                        "fusion must happen strictly after the generating fission"
                    )

        if data.kind == "radial":
            kind = "ring-radius"
        elif env.family == "sech":
            kind = "sech-law"
        else:
            kind = "sqrt-law"
        W = data.halfwidth()
        for ev in fission_events:
            s_min = ev.slow
            ups = sorted([s for s in maxima if s > s_min] + [W])
            downs = sorted([s for s in minima + maxima if s < s_min] + [-W])
            if data.kind == "radial":
                branches = [(s_min, ups[0])]
            else:
                branches = [(s_min, ups[0]), (s_min, downs[-1])]
            for s_from, s_to in branches:
                if abs(s_to - s_from) < 1e-12:
                    continue
                samples = _branch_samples(prof, s_from, s_to)
                if samples.shape[0] < 2:
                    continue
                trajectories.append(
                    Trajectory(
                        kind,
                        ev,
                        samples,
                        speed_exponent=-0.5,
                        asymptotic_speed=(
                            sigma * np.sign(s_to - s_from)
                            if env.family == "sech"
                            else None
                        ),
                    )
                )

    return MAEPrediction(
        phi=data.phi,
        sigma=sigma,
        alpha0=alpha0,
        beta0=beta0,
        t0=t0,
        x10=x10,
        profiles=prof,
        events=events,
        trajectories=trajectories,
        diagnostic=diagnostic,
    )


def _stable_mode_coeffs(n, cp, cm, kx, t):
    """Exact linearized evolution of one harmonic (a, b*) via the closed-form
    matrix exponential of [[-i mu, 2i], [-2i, i mu]], mu = (n kx)^2 - 2."""
    mu = (n * kx) ** 2 - 2.0
    lam = np.sqrt(complex(4.0 - mu * mu))
    t = np.asarray(t, dtype=float)
    if abs(lam) < 1e-14:
        ch, sh_over = np.ones_like(t, dtype=complex), t.astype(complex)
    else:
        ch = np.cosh(lam * t)
        sh_over = np.sinh(lam * t) / lam
    a0, bbar0 = complex(cp), complex(np.conj(cm))
    a = ch * a0 + sh_over * (-1j * mu * a0 + 2j * bbar0)
    bbar = ch * bbar0 + sh_over * (-2j * a0 + 1j * mu * bbar0)
    return a, np.conj(bbar)


def linear_stage(x, Y, t, data: CauchyData):
    """Linear-MI-stage field: growing plus decaying parts, exact within the
    linearization. Valid for 0 <= t << (1/sigma) ln(1/eps).

    Stable harmonics are included only when declared on the datum.
    """
    x = np.asarray(x, dtype=float)
    Y = np.asarray(Y, dtype=float)
    t = np.asarray(t, dtype=float)
    alpha, beta = alpha_beta(data)
    aY = alpha(Y)
    bY = beta(Y)
    kx, sigma, phi = data.kx, data.sigma, data.phi
    x1 = (np.angle(aY) + np.pi / 2) / kx
    x0 = (-np.angle(bY) + np.pi / 2) / kx
    w = (2 * np.abs(aY) / sigma) * np.exp(sigma * t + 1j * phi) * np.cos(kx * (x - x1))
    w = w + (2 * np.abs(bY) / sigma) * np.exp(-sigma * t - 1j * phi) * np.cos(
        kx * (x - x0)
    )
    for n, cp, cm in data.stable_modes:
        an, bn = _stable_mode_coeffs(n, cp, cm, kx, t)
        w = w + an * np.exp(1j * n * kx * x) + bn * np.exp(-1j * n * kx * x)
    out = np.exp(2j * t) * (1.0 + data.epsilon * w)
    return _scalar_or_array(out)


@dataclass
class CurvatureFlip:
    """One predicted sign change of the transverse crest curvature."""

    slow: float
    time: float
    sign_before: str
    sign_after: str
    kind: str  # fission | fusion


@dataclass
class CurvatureFlipPrediction:
    t0: float
    sign_before: str
    sign_after: str
    tt1: float  # d^2 t1 / dY^2 at the first-appearance crest
    flips: list[CurvatureFlip]


def curvature_flip_prediction(data: CauchyData) -> CurvatureFlipPrediction:
    """Sign flips of (|u1|^2)_YY at crest sites.

    At a minimum of t1 the curvature equals -t1''(Y*) * rho'(t) with
    t1'' = |f''(Y*)|/sigma > 0, so it crosses from negative to positive
    exactly at the local appearance time (fission); interior maxima of t1
    flip the opposite way (fusion).
    """
    prof = appearance_profiles(data)
    minima, maxima = _critical_points(data, prof)
    if not minima:
        raise ValueError("envelope has no crest maximum: prediction not applicable")
    flips = []
    for s in minima:
        fpp = data.envelope.fpp_at_extremum(s)
        if fpp == 0.0:
            raise ValueError(
                f"degenerate envelope: f''({s}) = 0, curvature prediction not applicable"
            )
        flips.append(CurvatureFlip(float(s), float(prof.t1_of(s)), "-", "+", "fission"))
    for s in maxima:
        t_fus = float(prof.t1_of(s))
        if t_fus < Q1DProfiles.T1_CAP * 0.5:
            flips.append(CurvatureFlip(float(s), t_fus, "+", "-", "fusion"))
    flips.sort(key=lambda fl: fl.time)
    s_gl = min(minima, key=lambda s: prof.t1_of(s))
    tt1 = abs(data.envelope.fpp_at_extremum(s_gl)) / data.sigma
    return CurvatureFlipPrediction(
        t0=float(prof.t1_of(s_gl)),
        sign_before="-",
        sign_after="+",
        tt1=tt1,
        flips=flips,
    )
