"""True, modified and Bessel tail integrals of a Fourier transform.

For a threshold ``t > 0`` and ``1 <= p' < inf``

    true      (int_{|xi| >= t} |g|^{p'} dxi)^{1/p'}
    modified  (int min(1, (|xi| / t)^{m p'}) |g|^{p'} dxi)^{1/p'}
    bessel    (int G_{m p'/2}(|xi| / t) |g|^{p'} dxi)^{1/p'}

and for ``p' = inf`` the integrals become suprema. ``g`` is either a gridded
:class:`~fourier_moduli.field.Spectrum` or an analytic
:class:`~fourier_moduli.field.RadialSpectrum`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import BandLimitError, DomainError
from .field import RadialSpectrum, SampledField, Spectrum, _check_p, dft, sphere_area
from .kernel import g_alpha_mean, kernel_table
from .profiles import DecayProfile, as_grid

__all__ = [
    "TailVariant",
    "TailKind",
    "BAND_MARGIN",
    "true_tail",
    "modified_tail",
    "bessel_tail",
    "tail",
    "tail_many",
    "tail_profile",
    "radial_shells",
]

BAND_MARGIN = 0.8
_QUAD = dict(epsabs=1e-12, epsrel=1e-10, limit=500)


class TailVariant(str, enum.Enum):
    TRUE = "true"
    MODIFIED = "modified"
    BESSEL = "bessel"
    SUP_TRUE = "sup_true"
    SUP_MODIFIED = "sup_modified"


@dataclass(frozen=True)
class TailKind:
    """Which tail to compute: ``variant``, exponent ``pprime`` and order ``m``."""

    variant: TailVariant
    pprime: float
    m: float = 1.0

    def __post_init__(self):
        variant = TailVariant(self.variant)
        pprime = _check_p(self.pprime)
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "pprime", pprime)
        if not (self.m > 0 and math.isfinite(self.m)):
            raise DomainError(f"m must be positive, got {self.m}")
        sup = variant in (TailVariant.SUP_TRUE, TailVariant.SUP_MODIFIED)
        if sup != math.isinf(pprime):
            raise DomainError("the sup variants are exactly the p' = inf tails")
        if variant is TailVariant.BESSEL and math.isinf(pprime):
            raise DomainError("the Bessel tail needs a finite p'")

    @classmethod
    def of(cls, mode: str, pprime: float, m: float = 1.0) -> "TailKind":
        """``mode`` in ``{"true", "modified", "bessel"}``; ``p' = inf`` picks the sup variant."""
        pprime = _check_p(pprime)
        if math.isinf(pprime) and mode in ("true", "modified"):
            mode = "sup_" + mode
        return cls(TailVariant(mode), pprime, m)

    @property
    def base(self) -> str:
        return self.variant.value.removeprefix("sup_")


def _as_spectrum(spec):
    if isinstance(spec, SampledField):
        return dft(spec)
    if isinstance(spec, (Spectrum, RadialSpectrum)):
        return spec
    raise DomainError(f"expected a Spectrum, SampledField or RadialSpectrum, got {type(spec).__name__}")


# ---------------------------------------------------------------------------
# gridded spectra


def radial_shells(spec: Spectrum, pprime: float):
    """Distinct ``|xi|`` on the grid with the ``|g|^{p'} dxi`` mass (or the max of ``|g|``) on each.

    Returns ``(radii, mass)`` sorted by radius; for ``p' = inf`` the second
    array holds the largest ``|g|`` on each shell.
    """
    g = spec.grid
    j = np.arange(g.samples) - g.samples // 2
    key = np.zeros(g.shape, dtype=np.int64)
    for a in range(g.dim):
        shape = [1] * g.dim
        shape[a] = g.samples
        key = key + (j * j).reshape(shape)
    uniq, inv = np.unique(key.ravel(), return_inverse=True)
    radii = np.sqrt(uniq.astype(float)) * g.frequency_spacing
    amp = np.abs(spec.coeffs).ravel()
    if math.isinf(pprime):
        mass = np.zeros(uniq.size)
        np.maximum.at(mass, inv, amp)
    else:
        mass = np.bincount(inv, weights=amp**pprime, minlength=uniq.size) * g.frequency_cell_volume
    return radii, mass


def _band_check(spec: Spectrum, ts: np.ndarray, margin: float):
    limit = margin * spec.grid.nyquist
    bad = ts > limit * (1 + 1e-12)
    if bad.any():
        raise BandLimitError(float(ts[bad][0]), limit, spec.grid.nyquist)


def _grid_tails(spec: Spectrum, kind: TailKind, ts: np.ndarray, margin: float) -> np.ndarray:
    _band_check(spec, ts, margin)
    pp, m = kind.pprime, kind.m
    r, mass = radial_shells(spec, pp)
    if kind.variant is TailVariant.SUP_TRUE:
        # suffix maxima over shells
        suffix = np.maximum.accumulate(mass[::-1])[::-1]
        idx = np.searchsorted(r, ts, side="left")
        return np.where(idx < r.size, suffix[np.minimum(idx, r.size - 1)], 0.0)
    if kind.variant is TailVariant.SUP_MODIFIED:
        return np.array([np.max(np.minimum(1.0, (r / t) ** m) * mass) for t in ts])
    if kind.variant is TailVariant.BESSEL:
        _need_dim2(spec.grid.dim)
        table = kernel_table(spec.grid.dim, 0.5 * m * pp)
        total = np.array([np.dot(table(r / t), mass) for t in ts])
        return total ** (1.0 / pp)
    # running sums give every threshold in O(1)
    outer = np.concatenate([np.cumsum(mass[::-1])[::-1], [0.0]])
    idx = np.searchsorted(r, ts, side="left")
    if kind.variant is TailVariant.TRUE:
        return outer[idx] ** (1.0 / pp)
    out = np.empty(ts.size)
    for k, (t, i) in enumerate(zip(ts, idx)):
        inner = np.dot((r[:i] / t) ** (m * pp), mass[:i])
        out[k] = (inner + outer[i]) ** (1.0 / pp)
    return out


def _need_dim2(d: int):
    if d < 2:
        raise DomainError("the Bessel tail is defined for d >= 2 only")


# ---------------------------------------------------------------------------
# analytic radial spectra


def _integrate(func, a: float, b: float, knots=()) -> float:
    """``int_a^b func`` by adaptive Gauss-Kronrod, split at ``knots``; ``b`` may be inf."""
    if not b > a:
        return 0.0
    pts = [a] + [k for k in knots if a < k < b] + [b]
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if math.isinf(hi) and lo > 0:
            # r = lo * e^u keeps slowly decaying power laws well conditioned
            def sub(u, lo=lo):
                r = lo * math.exp(min(u, 700.0))
                return func(r) * r if u < 700.0 else 0.0

            val = quad(sub, 0.0, math.inf, **_QUAD)[0]
        else:
            val = quad(func, lo, hi, **_QUAD)[0]
        total += val
    return total


def _power_integral(expo: float, a: float, b: float) -> float:
    """``int_a^b r^{expo - 1} dr`` for ``0 < a <= b``, accurate when ``expo`` is near 0."""
    if b <= a:
        return 0.0
    lg = math.log(b / a)
    if expo == 0:
        return lg
    return a**expo * math.expm1(expo * lg) / expo


def _radial_outer(spec: RadialSpectrum, pp: float, t: float) -> float:
    """``int_t^inf |g(r)|^{p'} r^{d-1} dr``."""
    d = spec.dim
    tail = spec.power_tail
    upper = spec.support_bound if spec.support_bound is not None else math.inf
    if spec.support_bound is not None and t >= spec.support_bound:
        return 0.0

    def f(r):
        return float(spec(r)) ** pp * r ** (d - 1)

    if tail is None:
        return _integrate(f, t, upper, spec.knots(t, upper))
    start = max(t, tail.onset)
    expo = tail.exponent * pp - d
    if expo <= 0:
        return math.inf
    closed = tail.amplitude**pp * start ** (-expo) / expo
    return _integrate(f, t, start, spec.knots(t, start)) + closed


def _radial_inner(spec: RadialSpectrum, pp: float, m: float, t: float) -> float:
    """``int_0^t (r / t)^{m p'} |g(r)|^{p'} r^{d-1} dr``."""
    d = spec.dim
    tail = spec.power_tail
    top = t if spec.support_bound is None else min(t, spec.support_bound)
    w = m * pp

    def f(r):
        return (r / t) ** w * float(spec(r)) ** pp * r ** (d - 1)

    if tail is None or top <= tail.onset:
        return _integrate(f, 0.0, top, spec.knots(0.0, top))
    head = _integrate(f, 0.0, tail.onset, spec.knots(0.0, tail.onset))
    expo = w - tail.exponent * pp + d
    body = tail.amplitude**pp * t ** (-w) * _power_integral(expo, tail.onset, top)
    return head + body


# beyond this ratio |xi| / t the kernel is replaced by its mean value
BESSEL_FAR = 32 * math.pi


def _radial_bessel(spec: RadialSpectrum, pp: float, m: float, t: float) -> float:
    d = spec.dim
    _need_dim2(d)
    alpha = 0.5 * m * pp
    table = kernel_table(d, alpha)
    upper = spec.support_bound if spec.support_bound is not None else math.inf
    cut = min(upper, BESSEL_FAR * t)

    def f(r):
        return float(table(r / t)) * float(spec(r)) ** pp * r ** (d - 1)

    # split at the kernel's quarter periods, where it oscillates
    knots = set(spec.knots(0.0, cut))
    step = 0.5 * math.pi * t
    knots.update(step * np.arange(1, int(cut / step) + 1))
    near = _integrate(f, 0.0, cut, sorted(knots))
    # the oscillation left out decays like v^{-(d-1)/2} and mostly cancels
    far = g_alpha_mean(d, alpha) * _radial_outer(spec, pp, cut) if cut < upper else 0.0
    return near + far


def _radial_sup(spec: RadialSpectrum, weight, lo: float, candidates=()) -> float:
    """``sup_{r >= lo} weight(r) |g(r)|`` by dense sampling plus a bounded refinement."""
    tail = spec.power_tail
    hi = spec.support_bound
    if hi is None:
        hi = 1e4 * max(1.0, lo) if tail is None else max([lo, tail.onset, *candidates])
    if lo >= hi:
        pts = np.array([lo])
    else:
        base = max(lo, 1e-9)
        pts = np.unique(np.concatenate([[lo], np.geomspace(base, hi, 4001), [hi], list(candidates)]))
        pts = pts[(pts >= lo) & (pts <= hi)]
    vals = weight(pts) * spec(pts)
    k = int(np.argmax(vals))
    best = float(vals[k])
    a, b = pts[max(k - 1, 0)], pts[min(k + 1, pts.size - 1)]
    if b > a:
        res = minimize_scalar(lambda r: -float(weight(r) * spec(r)), bounds=(a, b), method="bounded", options={"xatol": 1e-12 * b})
        best = max(best, -float(res.fun))
    return best


def _radial_tails(spec: RadialSpectrum, kind: TailKind, ts: np.ndarray) -> np.ndarray:
    pp, m = kind.pprime, kind.m
    area = sphere_area(spec.dim)
    out = np.empty(ts.size)
    for k, t in enumerate(ts):
        v = kind.variant
        if v is TailVariant.TRUE:
            out[k] = (area * _radial_outer(spec, pp, t)) ** (1.0 / pp)
        elif v is TailVariant.MODIFIED:
            val = _radial_inner(spec, pp, m, t) + _radial_outer(spec, pp, t)
            out[k] = (area * val) ** (1.0 / pp)
        elif v is TailVariant.BESSEL:
            out[k] = (area * _radial_bessel(spec, pp, m, t)) ** (1.0 / pp)
        elif v is TailVariant.SUP_TRUE:
            out[k] = _radial_sup(spec, lambda r: np.ones_like(r, dtype=float), t)
        else:
            out[k] = _radial_sup(spec, lambda r, t=t: np.minimum(1.0, (np.asarray(r) / t) ** m), 0.0, [t])
    return out


# ---------------------------------------------------------------------------
# public interface


def tail_many(spec, kind: TailKind, ts, margin: float = BAND_MARGIN) -> np.ndarray:
    """Tail values at every threshold in ``ts``."""
    spec = _as_spectrum(spec)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if not (np.isfinite(ts).all() and (ts > 0).all()):
        raise DomainError("thresholds t must be positive and finite")
    if isinstance(spec, RadialSpectrum):
        return _radial_tails(spec, kind, ts)
    return _grid_tails(spec, kind, ts, margin)


def tail(spec, kind: TailKind, t: float, margin: float = BAND_MARGIN) -> float:
    return float(tail_many(spec, kind, [t], margin)[0])


def true_tail(spec, pprime: float, t: float, margin: float = BAND_MARGIN) -> float:
    """``(int_{|xi| >= t} |g|^{p'})^{1/p'}``, or ``sup_{|xi| >= t} |g|`` for ``p' = inf``.

    Gridded spectra sum over frequency cells with ``|xi|`` taken at the cell
    centre; thresholds above ``margin`` times the Nyquist frequency raise
    :class:`~fourier_moduli.errors.BandLimitError`.
    """
    return tail(spec, TailKind.of("true", pprime), t, margin)


def modified_tail(spec, pprime: float, m: float, t: float, margin: float = BAND_MARGIN) -> float:
    """True tail plus the inner mass weighted by ``(|xi| / t)^{m p'}``."""
    return tail(spec, TailKind.of("modified", pprime, m), t, margin)


def bessel_tail(spec, pprime: float, m: float, t: float, margin: float = BAND_MARGIN) -> float:
    """Tail against the spherical kernel ``G_{m p'/2}(|xi| / t)``; needs ``d >= 2``."""
    return tail(spec, TailKind.of("bessel", pprime, m), t, margin)


def tail_profile(spec, kind: TailKind, t_grid, margin: float = BAND_MARGIN) -> DecayProfile:
    """Tail values on ``t_grid`` as a :class:`~fourier_moduli.profiles.DecayProfile`."""
    ts = np.sort(as_grid(t_grid))
    vals = tail_many(spec, kind, ts, margin)
    note = f"{kind.variant.value} tail, p'={kind.pprime:g}"
    if kind.variant not in (TailVariant.TRUE, TailVariant.SUP_TRUE):
        note += f", m={kind.m:g}"
    return DecayProfile(ts, vals, "t", [note])
