"""Named test functions and spectra with known decay laws.

Entries are built by :func:`make` or from a URI such as
``corpus:ball?d=2&r=1&N=512``. Sampled entries accept the grid keys ``L``
(half extent) and ``N`` (samples per axis); spectral entries return a
:class:`~fourier_moduli.field.RadialSpectrum` unless a grid is supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional
from urllib.parse import parse_qsl

import numpy as np

from .errors import DomainError
from .field import GridSpec, PowerTail, RadialSpectrum, SampledField, sample_field, sample_spectrum

__all__ = ["CorpusEntry", "REGISTRY", "make", "parse_uri", "from_uri", "names", "powerlaw_fill"]


@dataclass(frozen=True)
class CorpusEntry:
    """A named construction plus whatever is known about its decay in closed form."""

    name: str
    kind: str  # "field" or "spectrum"
    dims: tuple
    build: Callable
    defaults: Mapping = field(default_factory=dict)
    known: Optional[Callable] = None
    description: str = ""

    def known_values(self, params: Mapping) -> dict:
        return dict(self.known(params)) if self.known else {}


def _grid_for(d: int, params: Mapping, L: float, N: int) -> GridSpec:
    return GridSpec(d, float(params.get("L", L)), int(params.get("N", N)))


_BALL_N = {1: 4096, 2: 512, 3: 64}
_GAUSS_N = {1: 512, 2: 128, 3: 64}


def _ball(params, grid):
    d, r = int(params["d"]), float(params["r"])
    if not r > 0:
        raise DomainError(f"ball radius must be positive, got {r}")
    grid = grid or _grid_for(d, params, 8 * r, _BALL_N.get(d, 32))

    def rule(*xs):
        return (sum(x * x for x in xs) <= r * r).astype(float)

    return sample_field(grid, rule)


def _gaussian(params, grid):
    d, s = int(params["d"]), float(params["sigma"])
    if not s > 0:
        raise DomainError(f"sigma must be positive, got {s}")
    grid = grid or _grid_for(d, params, 8 * s, _GAUSS_N.get(d, 32))
    return sample_field(grid, lambda *xs: np.exp(-sum(x * x for x in xs) / (2 * s * s)))


def powerlaw_fill(s: float) -> Callable:
    """Cubic ``1 + (s / 3)(1 - r^3)`` on ``[0, 1)``.

    It meets ``r^{-s}`` at ``r = 1`` with matching value and slope, has zero
    slope at the origin and decreases monotonically.
    """
    return lambda r: 1.0 + (s / 3.0) * (1.0 - r**3)


def _powerlaw_spectrum(d: int, pprime: float, alpha: float, name: str) -> RadialSpectrum:
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if not pprime >= 1:
        raise DomainError(f"pprime must lie in [1, inf], got {pprime}")
    s = (0.0 if math.isinf(pprime) else d / pprime) + alpha
    fill = powerlaw_fill(s)

    def rule(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(r < 1.0, fill(np.minimum(r, 1.0)), np.maximum(r, 1.0) ** (-s))

    return RadialSpectrum(
        name,
        d,
        rule,
        {"d": d, "pprime": pprime, "alpha": alpha},
        power_tail=PowerTail(1.0, 1.0, s),
        breakpoints=(1.0,),
    )


def _spectral(build):
    def wrapped(params, grid):
        spec = build(params)
        return spec if grid is None else sample_spectrum(spec, grid)

    return wrapped


def _powerlaw(params):
    return _powerlaw_spectrum(int(params["d"]), float(params["pprime"]), float(params["alpha"]), "powerlaw")


def _borderline(params):
    return _powerlaw_spectrum(int(params["d"]), float(params["pprime"]), float(params["m"]), "borderline")


def _bump(params):
    d, R = int(params["d"]), float(params["R"])
    if not R > 0:
        raise DomainError(f"support radius must be positive, got {R}")

    def rule(r):
        x = np.asarray(r, dtype=float) / R
        inside = x < 1.0
        out = np.zeros_like(x)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
        return out

    return RadialSpectrum("bump", d, rule, {"d": d, "R": R}, support_bound=R)


def _conc(params):
    w, c = float(params["w"]), float(params["center"])
    if not 0 < w < c:
        raise DomainError(f"width must lie in (0, center), got {w}")

    def rule(r):
        return (np.abs(np.asarray(r, dtype=float) - c) <= w).astype(float)

    return RadialSpectrum("conc", 1, rule, {"w": w, "center": c}, support_bound=c + w, breakpoints=(c - w,))


def _known_powerlaw(params):
    d, pp, a = int(params["d"]), float(params["pprime"]), float(params.get("alpha", params.get("m", 0)))
    out = {"gamma": a, "log_power": 0.0}
    if not math.isinf(pp):
        area = 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)
        out["true_tail_amplitude"] = (area / (a * pp)) ** (1 / pp)
    return out


REGISTRY = {
    e.name: e
    for e in [
        CorpusEntry(
            "ball", "field", (1, 2, 3), _ball, {"d": 2, "r": 1.0},
            known=lambda p: {"gamma": 1.0}, description="indicator of the ball of radius r",
        ),
        CorpusEntry(
            "gaussian", "field", (1, 2, 3), _gaussian, {"d": 2, "sigma": 1.0},
            description="exp(-|x|^2 / (2 sigma^2))",
        ),
        CorpusEntry(
            "powerlaw", "spectrum", (1, 2, 3), _spectral(_powerlaw), {"d": 2, "pprime": 2.0, "alpha": 0.5},
            known=_known_powerlaw, description="|xi|^(-d/p' - alpha) beyond 1, cubic fill inside",
        ),
        CorpusEntry(
            "borderline", "spectrum", (1, 2, 3), _spectral(_borderline), {"d": 2, "pprime": 2.0, "m": 1.0},
            known=_known_powerlaw, description="power law with alpha = m",
        ),
        CorpusEntry(
            "bump", "spectrum", (1, 2, 3), _spectral(_bump), {"d": 2, "R": 4.0},
            description="exp(1 - 1 / (1 - (|xi| / R)^2)) inside the ball of radius R",
        ),
        CorpusEntry(
            "conc", "spectrum", (1,), _spectral(_conc), {"w": 0.2, "center": 2 * math.pi},
            description="indicator of center - w <= |xi| <= center + w on the line",
        ),
    ]
}


def names() -> list:
    return sorted(REGISTRY)


def _coerce(value):
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("inf", "infinity"):
            return math.inf
        try:
            return int(v)
        except ValueError:
            try:
                return float(v)
            except ValueError:
                return value
    return value


def make(name: str, params: Mapping | None = None, grid: GridSpec | None = None, **kwargs):
    """Build a corpus entry.

    Returns a :class:`~fourier_moduli.field.SampledField` for sampled entries,
    a :class:`~fourier_moduli.field.RadialSpectrum` for spectral entries, or a
    gridded :class:`~fourier_moduli.field.Spectrum` when ``grid`` is given.
    """
    entry = REGISTRY.get(name)
    if entry is None:
        raise DomainError(f"unknown corpus entry {name!r}; known: {', '.join(names())}")
    merged = dict(entry.defaults)
    merged.update({k: _coerce(v) for k, v in dict(params or {}, **kwargs).items()})
    allowed = set(entry.defaults) | {"L", "N"}
    unknown = set(merged) - allowed
    if unknown:
        raise DomainError(f"unknown parameters for {name}: {', '.join(sorted(unknown))}")
    if "d" in merged and int(merged["d"]) not in entry.dims:
        raise DomainError(f"{name} supports d in {entry.dims}, got {merged['d']}")
    if entry.kind == "spectrum" and grid is None and ("L" in merged or "N" in merged):
        d = int(merged.get("d", 1))
        grid = GridSpec(d, float(merged.get("L", 8.0)), int(merged.get("N", 128)))
    return entry.build(merged, grid)


def parse_uri(uri: str) -> tuple:
    """Split ``corpus:<name>?k=v&...`` into ``(name, params)``."""
    if not uri.startswith("corpus:"):
        raise DomainError(f"not a corpus URI: {uri!r}")
    body = uri[len("corpus:"):]
    name, _, query = body.partition("?")
    try:
        params = dict(parse_qsl(query, keep_blank_values=False, strict_parsing=bool(query)))
    except ValueError:
        raise DomainError(f"malformed query in {uri!r}") from None
    return name, params


def from_uri(uri: str, grid: GridSpec | None = None):
    name, params = parse_uri(uri)
    return make(name, params, grid)
