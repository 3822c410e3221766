"""Shared domain types: model selection, periodic grids, complex fields.

All quantities are dimensionless. Grids are uniform and periodic, with
coordinates spanning [-L/2, L/2) so symmetric analytic profiles land on the
lattice without index shifts. Wavenumbers follow the standard DFT ordering
2*pi/L * [0, 1, ..., N/2-1, -N/2, ..., -1].
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelSpec",
    "PeriodicGrid",
    "ComplexField",
    "SimulationConfig",
    "make_grid",
    "wavenumber_axis",
    "CorruptFieldError",
]


class CorruptFieldError(RuntimeError):
    """Raised when a field contains NaN/Inf amplitudes."""


@dataclass(frozen=True)
class ModelSpec:
    """Which member of the focusing NLS family to integrate.

    dim=1 is the 1+1 cubic NLS; dim=2 adds eta1*u_yy (elliptic for
    eta1=+1, hyperbolic for eta1=-1); dim=3 adds eta2*u_zz as well.
    """

    dim: int = 1
    eta1: int = -1
    eta2: int = -1

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.eta1 not in (-1, 1) or self.eta2 not in (-1, 1):
            raise ValueError("transverse signs eta1, eta2 must be +1 or -1")

    @property
    def transverse_signs(self) -> tuple[int, ...]:
        return (self.eta1, self.eta2)[: self.dim - 1]

    def dispersion_symbol(self, grid: "PeriodicGrid") -> np.ndarray:
        """kx^2 + eta1*ky^2 (+ eta2*kz^2) broadcast to the grid shape."""
        if grid.dim != self.dim:
            raise ValueError(f"grid dim {grid.dim} != model dim {self.dim}")
        signs = (1,) + self.transverse_signs
        out = np.zeros(grid.shape)
        for axis, sgn in enumerate(signs):
            k = grid.wavenumbers[axis]
            shape = [1] * grid.dim
            shape[axis] = k.size
            out = out + sgn * (k.reshape(shape) ** 2)
        return out


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic lattice in 1, 2 or 3 dimensions.

    Coordinates are x_a[j] = -L_a/2 + j*L_a/N_a (no duplicated endpoint).
    """

    lengths: tuple[float, ...]
    counts: tuple[int, ...]
    coords: tuple[np.ndarray, ...] = field(repr=False, compare=False, default=())
    wavenumbers: tuple[np.ndarray, ...] = field(repr=False, compare=False, default=())

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.counts

    @property
    def spacings(self) -> tuple[float, ...]:
        return tuple(L / N for L, N in zip(self.lengths, self.counts))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    def meshgrid(self) -> list[np.ndarray]:
        return np.meshgrid(*self.coords, indexing="ij")


def make_grid(lengths, counts) -> PeriodicGrid:
    """Build a PeriodicGrid with coordinate and wavenumber tables.

    The wavenumber for index j on an axis of N points is
    2*pi/L * (j if j < N/2 else j - N).
    """
    lengths = tuple(float(L) for L in lengths)
    counts = tuple(int(N) for N in counts)
    if len(lengths) != len(counts):
        raise ValueError(
            f"lengths ({len(lengths)}) and counts ({len(counts)}) differ in dimension"
        )
    if not 1 <= len(lengths) <= 3:
        raise ValueError(f"grid dimension must be 1, 2 or 3, got {len(lengths)}")
    for a, (L, N) in enumerate(zip(lengths, counts)):
        if L <= 0:
            raise ValueError(f"axis {a}: length must be positive, got {L}")
        if N <= 0:
            raise ValueError(f"axis {a}: count must be positive, got {N}")
        if N < 8:
            warnings.warn(
                f"axis {a}: only {N} points; 8 or more recommended", stacklevel=2
            )
    coords = tuple(
        -L / 2 + (L / N) * np.arange(N) for L, N in zip(lengths, counts)
    )
    wavenumbers = tuple(
        2 * np.pi * np.fft.fftfreq(N, d=L / N) for L, N in zip(lengths, counts)
    )
    return PeriodicGrid(lengths, counts, coords, wavenumbers)


def wavenumber_axis(grid: PeriodicGrid, axis: int) -> np.ndarray:
    """DFT-ordered wavenumbers for one grid axis."""
    if not 0 <= axis < grid.dim:
        raise ValueError(f"axis {axis} out of range for a {grid.dim}-d grid")
    return grid.wavenumbers[axis]


@dataclass
class ComplexField:
    """Discretized complex amplitude u on a periodic lattice."""

    grid: PeriodicGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} != grid shape {self.grid.shape}"
            )

    def check_healthy(self):
        """Raise CorruptFieldError if any amplitude is NaN or Inf."""
        if not np.all(np.isfinite(self.values.view(np.float64))):
            raise CorruptFieldError(f"non-finite amplitudes at t={self.time}")

    def copy(self) -> "ComplexField":
        return ComplexField(self.grid, self.values.copy(), self.time)

    def modulus(self) -> np.ndarray:
        return np.abs(self.values)

    def max_modulus(self) -> float:
        v = self.values
        return float(np.sqrt(np.max(v.real * v.real + v.imag * v.imag)))


@dataclass
class SimulationConfig:
    """Time-stepping parameters for one evolution."""

    model: ModelSpec
    grid: PeriodicGrid
    dt: float
    t_end: float
    output_times: tuple[float, ...] = ()
    conservation_cadence: int = 100
    dealias: bool = False
    modulus_cap: float = 50.0
    tail_warn_ratio: float = 1e-8

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.dt > self.t_end:
            raise ValueError(f"dt={self.dt} exceeds t_end={self.t_end}")
        self.output_times = tuple(float(t) for t in self.output_times)
        if any(t < 0 or t > self.t_end + 1e-12 for t in self.output_times):
            raise ValueError("output times must lie within [0, t_end]")
        if list(self.output_times) != sorted(self.output_times):
            raise ValueError("output times must be sorted")
        if self.conservation_cadence < 1:
            raise ValueError("conservation cadence must be >= 1 step")
