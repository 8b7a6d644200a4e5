"""The spherical kernel ``G_alpha`` and a cached Chebyshev table for it.

For ``d >= 2`` and ``alpha > 0``

    G_alpha(v) = 2^alpha * int_{S^{d-1}} (1 - cos(y . w))^alpha dS_y,   |w| = v,

which after integrating out all angles but one becomes

    G_alpha(v) = 4^alpha |S^{d-2}| int_0^pi |sin(v cos(theta) / 2)|^{2 alpha} sin^{d-2}(theta) d theta

with ``|S^0| = 2``. For fractional ``alpha`` the integrand has algebraic
zeros at ``cos(theta) = 2 pi k / v``; the integral is split there and each
piece is integrated by Gauss-Jacobi quadrature with the zero absorbed into the
weight, which keeps the rule spectrally accurate.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.special import beta as beta_fn
from scipy.special import roots_jacobi

from .errors import DomainError
from .field import sphere_area

__all__ = ["g_alpha", "g_alpha_small_v_constant", "g_alpha_mean", "GAlphaTable", "kernel_table", "kernel_bracket"]


@lru_cache(maxsize=None)
def _jacobi(n: int, a: float, b: float):
    x, w = roots_jacobi(n, a, b)
    return x, w


def _check(d: int, alpha: float):
    if d < 2:
        raise DomainError("G_alpha is defined for d >= 2 only")
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")


def _piece(lo, hi, v, alpha, dm2, n, ord_lo, ord_hi):
    """Integral over [lo, hi] of |sin(v cos(theta) / 2)|^{2 alpha} sin^{d-2}(theta).

    ``ord_lo``/``ord_hi`` give the order (0, 1 or 2) of a zero of the sine
    factor at each end; the matching power is moved into the Jacobi weight.
    """
    ea = 2 * alpha * ord_hi
    eb = 2 * alpha * ord_lo
    x, w = _jacobi(n, ea, eb)
    half = 0.5 * (hi - lo)
    th = lo + half * (x + 1.0)
    den = (th - lo) ** ord_lo * (hi - th) ** ord_hi
    phi = (np.abs(np.sin(0.5 * v * np.cos(th))) / den) ** (2 * alpha)
    if dm2:
        phi = phi * np.sin(th) ** dm2
    return half ** (ea + eb + 1.0) * float(np.dot(w, phi))


def _graded(lo, hi, scale, v, alpha, dm2, n, ord_lo, ord_hi):
    """Like :func:`_piece`, with cells growing geometrically away from ``lo``.

    Used when a branch point sits at distance ``scale`` outside ``lo`` and
    ``scale`` is small compared with the piece.
    """
    if scale >= 0.1 * (hi - lo):
        return _piece(lo, hi, v, alpha, dm2, n, ord_lo, ord_hi)
    cuts = [lo, lo + 2 * scale]
    while 3 * (cuts[-1] - lo) <= 0.5 * (hi - lo):
        cuts.append(lo + 3 * (cuts[-1] - lo))
    total = 0.0
    for k, (a, b) in enumerate(zip(cuts[:-1], cuts[1:])):
        total += _piece(a, b, v, alpha, dm2, n, ord_lo if k == 0 else 0, 0)
    return total + _piece(cuts[-1], hi, v, alpha, dm2, n, 0, ord_hi)


def _half_integral(v: float, alpha: float, dm2: int, n: int) -> float:
    """``int_0^{pi/2} |sin(v cos(theta) / 2)|^{2 alpha} sin^{d-2}(theta) d theta``."""
    ratio = v / (2 * math.pi)
    top = round(ratio)
    zero_at_0 = top >= 1 and abs(ratio - top) <= 1e-13 * ratio
    k_max = top - 1 if zero_at_0 else math.floor(ratio)
    # zeros of the sine factor, decreasing from pi/2
    zeros = [math.acos(k / ratio) for k in range(0, k_max + 1)]
    smooth = float(alpha).is_integer()
    total = 0.0
    for hi, lo in zip(zeros[:-2], zeros[1:-1]):
        total += _piece(lo, hi, v, alpha, dm2, n, 1, 1)
    last = zeros[-1]
    if len(zeros) > 1:
        # the mirror zero at -last is a branch point when last is tiny
        scale = math.inf if smooth or zero_at_0 else 2 * last
        total += _graded(last, zeros[-2], scale, v, alpha, dm2, n, 1, 1)
    if zero_at_0:
        return total + _piece(0.0, last, v, alpha, dm2, n, 2, 1)
    # complex zeros at +-i s just off theta = 0
    s = math.inf if smooth else math.acosh((k_max + 1) / ratio)
    return total + _graded(0.0, last, s, v, alpha, dm2, n, 0, 1)


def g_alpha(d: int, alpha: float, v, nodes: int = 24):
    """``G_alpha(v)`` by direct quadrature; ``v`` may be a scalar or an array."""
    _check(d, alpha)
    va = np.asarray(v, dtype=float)
    if (va < 0).any() or not np.isfinite(va).all():
        raise DomainError("v must be finite and nonnegative")
    pref = 2.0 * 4.0**alpha * sphere_area(d - 1)
    flat = va.ravel()
    out = np.array([pref * _half_integral(x, alpha, d - 2, nodes) if x > 0 else 0.0 for x in flat])
    out = out.reshape(va.shape)
    return float(out) if out.ndim == 0 else out


def g_alpha_small_v_constant(d: int, alpha: float) -> float:
    """Limit of ``G_alpha(v) / v^{2 alpha}`` as ``v -> 0``."""
    _check(d, alpha)
    return sphere_area(d - 1) * beta_fn(alpha + 0.5, 0.5 * (d - 1))


def g_alpha_mean(d: int, alpha: float) -> float:
    """Large-``v`` average of ``G_alpha``: ``4^alpha |S^{d-1}|`` times the mean of ``|sin|^{2 alpha}``."""
    _check(d, alpha)
    mean = math.exp(math.lgamma(alpha + 0.5) - math.lgamma(alpha + 1.0)) / math.sqrt(math.pi)
    return 4.0**alpha * sphere_area(d) * mean


def _scaled_g(d, alpha, v, nodes):
    """``G_alpha(v) / v^{2 alpha}``, exact at ``v = 0``."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    zero = v == 0
    out[zero] = g_alpha_small_v_constant(d, alpha)
    out[~zero] = g_alpha(d, alpha, v[~zero], nodes) / v[~zero] ** (2 * alpha)
    return out


def _stack(pieces):
    edges = np.array([p[0] for p in pieces])
    widths = np.array([p[1] - p[0] for p in pieces])
    coef = np.array([p[2] for p in pieces]).reshape(len(pieces), -1)
    return edges, widths, coef


def _clenshaw(edges, widths, coef, v):
    """Evaluate the piecewise Chebyshev series at each ``v``."""
    if not v.size:
        return np.empty(0)
    idx = np.clip(np.searchsorted(edges, v, side="right") - 1, 0, len(edges) - 1)
    x = 2 * (v - edges[idx]) / widths[idx] - 1
    cf = coef[idx]
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(cf.shape[1] - 1, 0, -1):
        b1, b2 = 2 * x * b1 - b2 + cf[:, k], b1
    return x * b1 - b2 + cf[:, 0]


class GAlphaTable:
    """Piecewise Chebyshev interpolant of ``G_alpha`` for one ``(d, alpha)``.

    On ``[0, 1]`` the analytic ratio ``G_alpha(v) / v^{2 alpha}`` is
    interpolated, so small arguments keep full relative accuracy. Beyond 1 the
    table is built lazily in quarter-period blocks; each block is bisected
    until the interpolant matches direct quadrature at probe points. Blocks
    are appended under a lock and never modified afterwards.
    """

    degree = 16

    def __init__(self, d: int, alpha: float, rtol: float = 1e-11, nodes: int = 24):
        _check(d, alpha)
        self.d = int(d)
        self.alpha = float(alpha)
        self.rtol = rtol
        self.nodes = nodes
        self._lock = threading.Lock()
        # one tuple so readers never see a half-updated table
        self._big = (np.empty(0), np.empty(0), np.empty((0, self.degree + 1)))
        self._built_to = 1.0
        self._small = _stack(self._fit(0.0, 1.0, scaled=True))

    def _direct(self, v, scaled):
        if scaled:
            return _scaled_g(self.d, self.alpha, v, self.nodes)
        return g_alpha(self.d, self.alpha, v, self.nodes)

    def _fit(self, lo, hi, scaled=False, depth=0):
        n = self.degree
        x = C.chebpts1(n + 1)
        v = lo + 0.5 * (hi - lo) * (x + 1)
        coef = C.chebfit(x, self._direct(v, scaled), n)
        xp = np.linspace(-0.95, 0.95, 8)
        vp = lo + 0.5 * (hi - lo) * (xp + 1)
        ref = self._direct(vp, scaled)
        err = np.max(np.abs(C.chebval(xp, coef) - ref))
        if err <= self.rtol * max(np.max(np.abs(ref)), 1e-300) or depth >= 48:
            return [(lo, hi, coef)]
        mid = 0.5 * (lo + hi)
        return self._fit(lo, mid, scaled, depth + 1) + self._fit(mid, hi, scaled, depth + 1)

    def _extend(self, vmax: float):
        with self._lock:
            if vmax <= self._built_to:
                return
            step = 0.5 * math.pi
            pieces = []
            lo = self._built_to
            while lo < vmax:
                hi = (math.floor(lo / step + 1e-12) + 1) * step
                pieces.extend(self._fit(lo, hi))
                lo = hi
            new = _stack(pieces)
            self._big = tuple(np.concatenate([a, b]) for a, b in zip(self._big, new))
            self._built_to = lo

    def __call__(self, v):
        va = np.asarray(v, dtype=float)
        if (va < 0).any():
            raise DomainError("v must be nonnegative")
        vmax = float(va.max()) if va.size else 0.0
        if vmax > self._built_to:
            self._extend(vmax)
        big = self._big
        out = np.empty(va.shape)
        small = va <= 1.0
        vs = va[small]
        out[small] = _clenshaw(*self._small, vs) * vs ** (2 * self.alpha)
        out[~small] = _clenshaw(*big, va[~small])
        return float(out) if out.ndim == 0 else out


_tables: dict = {}
_tables_lock = threading.Lock()


def kernel_table(d: int, alpha: float) -> GAlphaTable:
    """Shared :class:`GAlphaTable` for ``(d, alpha)``."""
    key = (int(d), float(alpha))
    with _tables_lock:
        tab = _tables.get(key)
        if tab is None:
            tab = _tables[key] = GAlphaTable(d, alpha)
    return tab


def kernel_bracket(d: int, alpha: float, v) -> tuple:
    """Extremes of ``G_alpha(v) / min(1, v)^{2 alpha}`` over the positive ``v`` given."""
    v = np.asarray(v, dtype=float)
    v = v[v > 0]
    ratio = g_alpha(d, alpha, v) / np.minimum(1.0, v) ** (2 * alpha)
    return float(ratio.min()), float(ratio.max())
