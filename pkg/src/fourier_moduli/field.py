"""Sampled functions on periodized boxes and their discrete Fourier transforms.

A :class:`GridSpec` describes the box ``[-L, L)^d`` cut into ``N`` cells per
axis. Samples sit at cell centres ``x_k = -L + (k + 1/2) h`` with
``h = 2L/N``, and the frequency grid is ``xi_j = pi j / L`` for
``j = -N/2, ..., N/2 - 1``. The transform convention is

.. math:: \\hat f(\\xi) = \\int e^{-i \\xi \\cdot x} f(x)\\, dx,

approximated by ``h^d`` times the phased DFT, so that :func:`dft` of a smooth,
rapidly decaying sample set reproduces the continuum transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import DomainError, NonFiniteError

__all__ = [
    "GridSpec",
    "SampledField",
    "Spectrum",
    "RadialSpectrum",
    "PowerTail",
    "sphere_area",
    "dft",
    "idft",
    "lp_norm",
    "spectral_l2_norm",
    "sample_field",
    "sample_spectrum",
]


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere S^{d-1}; equals 2 for ``d == 1``."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on ``[-half_extent, half_extent)^dim`` with ``samples`` cells per axis."""

    dim: int
    half_extent: float
    samples: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim}")
        if not self.half_extent > 0 or not math.isfinite(self.half_extent):
            raise DomainError(f"half_extent must be positive, got {self.half_extent}")
        if int(self.samples) != self.samples or self.samples < 4 or self.samples % 2:
            raise DomainError(f"samples must be an even integer >= 4, got {self.samples}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "half_extent", float(self.half_extent))
        object.__setattr__(self, "samples", int(self.samples))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.samples

    @property
    def frequency_spacing(self) -> float:
        return math.pi / self.half_extent

    @property
    def nyquist(self) -> float:
        return math.pi * self.samples / (2.0 * self.half_extent)

    @property
    def shape(self) -> tuple:
        return (self.samples,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def frequency_cell_volume(self) -> float:
        return self.frequency_spacing**self.dim

    @cached_property
    def axis_points(self) -> np.ndarray:
        """Cell centres along one axis."""
        k = np.arange(self.samples)
        return -self.half_extent + (k + 0.5) * self.spacing

    @cached_property
    def axis_frequencies(self) -> np.ndarray:
        """Frequencies ``pi j / L`` for ``j = -N/2 .. N/2 - 1``."""
        j = np.arange(self.samples) - self.samples // 2
        return j * self.frequency_spacing

    @cached_property
    def _axis_phase(self) -> np.ndarray:
        # e^{-i xi_j x_k} = phase_j * e^{-2 pi i j k / N} on the cell-centred grid
        j = np.arange(self.samples) - self.samples // 2
        return np.exp(1j * math.pi * j * (1.0 - 1.0 / self.samples))

    def coordinates(self) -> list:
        """Open mesh of sample coordinates, one broadcastable array per axis."""
        return _open_mesh(self.axis_points, self.dim)

    def frequencies(self) -> list:
        """Open mesh of frequencies, one broadcastable array per axis."""
        return _open_mesh(self.axis_frequencies, self.dim)

    @cached_property
    def frequency_norm(self) -> np.ndarray:
        """``|xi|`` on the full frequency grid (read-only)."""
        sq = np.zeros(self.shape)
        for w in self.frequencies():
            sq = sq + w * w
        out = np.sqrt(sq)
        out.setflags(write=False)
        return out

    def to_dict(self) -> dict:
        return {"dim": self.dim, "half_extent": self.half_extent, "samples": self.samples}


def _open_mesh(axis: np.ndarray, dim: int) -> list:
    out = []
    for a in range(dim):
        shape = [1] * dim
        shape[a] = axis.size
        out.append(axis.reshape(shape))
    return out


def _frozen_complex(values, shape) -> np.ndarray:
    arr = np.array(values, dtype=complex, copy=True)
    if arr.shape != shape:
        if arr.size == math.prod(shape):
            arr = arr.reshape(shape)
        else:
            raise DomainError(f"expected {math.prod(shape)} values for shape {shape}, got {arr.size}")
    bad = ~np.isfinite(arr)
    if bad.any():
        raise NonFiniteError(np.unravel_index(int(np.argmax(bad)), shape))
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampledField:
    """Complex samples of a function at the cell centres of ``grid``."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_complex(self.values, self.grid.shape))

    def __add__(self, other: "SampledField") -> "SampledField":
        _same_grid(self.grid, other.grid)
        return SampledField(self.grid, self.values + other.values)

    def scaled(self, a: complex) -> "SampledField":
        return SampledField(self.grid, a * self.values)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients on the frequency grid of ``grid``.

    ``coeffs`` approximate the continuum transform, i.e. they carry the
    ``spacing**dim`` factor. Index ``(0, ..., 0)`` is frequency ``-N/2``.
    """

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_complex(self.coeffs, self.grid.shape))

    @cached_property
    def power(self) -> np.ndarray:
        """``|coeffs|**2`` as a read-only real array."""
        out = np.abs(self.coeffs) ** 2
        out.setflags(write=False)
        return out


def _same_grid(a: GridSpec, b: GridSpec):
    if a != b:
        raise DomainError(f"grids differ: {a} vs {b}")


def _phase(grid: GridSpec) -> np.ndarray:
    ph = np.ones(grid.shape, dtype=complex)
    for w in _open_mesh(grid._axis_phase, grid.dim):
        ph = ph * w
    return ph


def dft(f: SampledField) -> Spectrum:
    """Forward transform ``sum_x e^{-i xi.x} f(x) h^d`` on the frequency grid."""
    g = f.grid
    F = np.fft.fftshift(np.fft.fftn(f.values))
    return Spectrum(g, F * _phase(g) * g.cell_volume)


def idft(s: Spectrum) -> SampledField:
    """Inverse of :func:`dft`."""
    g = s.grid
    F = s.coeffs / (_phase(g) * g.cell_volume)
    return SampledField(g, np.fft.ifftn(np.fft.ifftshift(F)))


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise DomainError(f"p must lie in [1, inf], got {p}")
    return p


def lp_norm(f: SampledField, p: float) -> float:
    """Riemann-sum L^p norm; ``p = inf`` gives the grid maximum of ``|f|``."""
    p = _check_p(p)
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max())
    if p == 2.0:
        return float(np.sqrt(np.sum(a * a) * f.grid.cell_volume))
    return float((np.sum(a**p) * f.grid.cell_volume) ** (1.0 / p))


def spectral_l2_norm(s: Spectrum) -> float:
    """``((2 pi)^{-d} sum |coeffs|^2 dxi^d)^{1/2}``; equals the L^2 norm of ``idft(s)``."""
    g = s.grid
    return float(np.sqrt(np.sum(s.power) * g.frequency_cell_volume / (2 * math.pi) ** g.dim))


def sample_field(grid: GridSpec, func: Callable) -> SampledField:
    """Evaluate ``func(*coords)`` on the cell centres."""
    vals = np.broadcast_to(func(*grid.coordinates()), grid.shape)
    return SampledField(grid, vals)


@dataclass(frozen=True)
class PowerTail:
    """``profile(r) = amplitude * r**(-exponent)`` for ``r >= onset``."""

    onset: float
    amplitude: float
    exponent: float


@dataclass(frozen=True, eq=False)
class RadialSpectrum:
    """Analytic radial profile ``r -> |g|(r)`` of a spectrum on R^dim.

    ``rule`` is a vectorized callable. ``support_bound`` marks a compactly
    supported profile, ``power_tail`` enables closed-form tail integrals and
    ``breakpoints`` lists radii where the profile is not smooth.
    """

    name: str
    dim: int
    rule: Callable
    params: Mapping = field(default_factory=dict)
    support_bound: Optional[float] = None
    power_tail: Optional[PowerTail] = None
    breakpoints: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"dim must be >= 1, got {self.dim}")
        if self.support_bound is not None and not self.support_bound > 0:
            raise DomainError("support_bound must be positive")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.asarray(self.rule(r), dtype=float)
        if self.support_bound is not None:
            out = np.where(r > self.support_bound, 0.0, out)
        return out

    def knots(self, lo: float, hi: float) -> list:
        """Sorted radii in ``(lo, hi)`` where the profile changes form."""
        pts = set(self.breakpoints)
        if self.support_bound is not None:
            pts.add(self.support_bound)
        if self.power_tail is not None:
            pts.add(self.power_tail.onset)
        return sorted(p for p in pts if lo < p < hi)

    def is_integrable(self, pprime: float, cutoff: float = 1e6) -> bool:
        """Whether ``int |g|^{p'} dxi`` is finite.

        Power tails are decided analytically; otherwise the radial integral is
        evaluated up to ``cutoff`` and the remainder is assumed to be no larger
        than the last decade's contribution.
        """
        from scipy.integrate import quad

        pprime = _check_p(pprime)
        if math.isinf(pprime):
            return bool(np.isfinite(self(np.geomspace(1e-9, cutoff, 2001))).all())
        if self.power_tail is not None:
            return self.power_tail.exponent * pprime > self.dim
        upper = self.support_bound if self.support_bound is not None else cutoff

        def integrand(r):
            return float(self(r)) ** pprime * r ** (self.dim - 1)

        decades = [10.0**k for k in range(-3, int(math.log10(upper)) + 1) if 10.0**k < upper]
        knots = sorted({0.0, upper, *self.knots(0.0, upper), *decades})
        total = sum(quad(integrand, a, b, limit=200)[0] for a, b in zip(knots[:-1], knots[1:]))
        if self.support_bound is not None:
            return math.isfinite(total)
        last = quad(integrand, cutoff / 10, cutoff, limit=200)[0]
        return math.isfinite(total) and last <= 1e-3 * max(total, 1e-300)


def sample_spectrum(radial: RadialSpectrum, grid: GridSpec) -> Spectrum:
    """Place ``radial(|xi|)`` on the frequency grid of ``grid``."""
    if radial.dim != grid.dim:
        raise DomainError(f"spectrum has dim {radial.dim}, grid has dim {grid.dim}")
    return Spectrum(grid, radial(grid.frequency_norm))
