"""Log-log fits of decay laws ``C t^{-gamma} (log t)^{beta}``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .errors import DomainError, FitError
from .profiles import DecayProfile

__all__ = [
    "ExponentFit",
    "ZeroTail",
    "fit_exponent",
    "DecayExponentRegressor",
    "AUTO_IMPROVEMENT",
    "RESIDUAL_FLOOR",
    "ZERO_FLOOR",
]

# PowerLog must cut the worst relative residual by this fraction to be chosen
AUTO_IMPROVEMENT = 0.25
# below this the pure power law is already exact and the extra term is noise
RESIDUAL_FLOOR = 1e-9
# values at or below this fraction of the profile maximum count as zero
ZERO_FLOOR = 1e-14

MODELS = ("power", "powerlog", "auto")
_ALIASES = {"purepower": "power", "pure": "power", "power": "power", "powerlog": "powerlog", "auto": "auto"}


@dataclass(frozen=True)
class ExponentFit:
    """Fitted law ``amplitude * t^{-gamma} * (log t)^{log_power}``."""

    gamma: float
    log_power: float
    amplitude: float
    max_rel_residual: float
    model: str
    t_min: float
    t_max: float
    count: int
    trimmed: bool = False

    def predict(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = self.amplitude * t ** (-self.gamma)
        if self.log_power:
            out = out * np.log(t) ** self.log_power
        return out

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "log_power": self.log_power,
            "amplitude": self.amplitude,
            "max_rel_residual": self.max_rel_residual,
            "model": "PowerLog" if self.model == "powerlog" else "PurePower",
        }


@dataclass(frozen=True)
class ZeroTail:
    """The profile vanishes from ``onset`` on.

    ``exact`` separates values that are exactly zero (compact support) from
    values that merely fall below the numerical floor.
    """

    onset: float
    exact: bool
    count: int

    model = "ZeroTail"

    def to_dict(self) -> dict:
        return {"gamma": None, "log_power": None, "amplitude": 0.0, "max_rel_residual": 0.0, "model": "ZeroTail"}

    def predict(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.zeros_like(t)


def _model(name: str) -> str:
    key = _ALIASES.get(str(name).lower().replace("_", "").replace("-", ""))
    if key is None:
        raise DomainError(f"unknown model {name!r}; expected one of {', '.join(MODELS)}")
    return key


def _lstsq(x_cols, y):
    A = np.column_stack(x_cols)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return coef, A @ coef


def _fit_one(t, v, model):
    lt = np.log(t)
    lv = np.log(v)
    if model == "power":
        coef, pred = _lstsq([np.ones_like(lt), -lt], lv)
        gamma, beta = coef[1], 0.0
    else:
        coef, pred = _lstsq([np.ones_like(lt), -lt, np.log(lt)], lv)
        gamma, beta = coef[1], coef[2]
    resid = float(np.max(np.abs(np.expm1(pred - lv))))
    return float(gamma), float(beta), float(math.exp(coef[0])), resid


def _trim(t: np.ndarray):
    """Drop the lowest and highest octave when at least four points remain."""
    keep = (t >= 2 * t[0] * (1 - 1e-12)) & (t <= t[-1] / 2 * (1 + 1e-12))
    if keep.sum() >= 4:
        return keep, True
    return np.ones_like(t, dtype=bool), False


def fit_exponent(
    profile: Union[DecayProfile, tuple],
    model: str = "auto",
    trim: bool = True,
) -> Union[ExponentFit, ZeroTail]:
    """Least-squares fit of ``log value`` against ``log t`` (and ``log log t``).

    ``model`` is ``"power"``, ``"powerlog"`` or ``"auto"``; the automatic
    choice takes the log term only if it lowers the worst relative residual by
    at least 25% and the pure power law is not already exact; it is only
    tried when every fitted ``t`` exceeds 1. With ``trim``
    the first and last octave are dropped as long as four points remain. A
    profile that is zero from some ``t`` on yields :class:`ZeroTail`.
    """
    model = _model(model)
    if isinstance(profile, DecayProfile):
        t, v = profile.t, profile.values
        order = np.argsort(t)
        t, v = t[order], v[order]
    else:
        t, v = (np.asarray(a, dtype=float) for a in profile)
        order = np.argsort(t)
        t, v = t[order], v[order]
    if t.size == 0:
        raise FitError("empty profile")
    vmax = float(np.max(v)) if v.size else 0.0
    zero = v <= ZERO_FLOOR * vmax if vmax > 0 else np.ones_like(v, dtype=bool)
    if zero.any():
        # zeros followed only by zeros mark a vanishing tail
        tail_start = v.size - np.argmin(zero[::-1]) if not zero.all() else 0
        if zero[tail_start:].all() and tail_start < v.size:
            return ZeroTail(float(t[tail_start]), bool((v[tail_start:] == 0).all()), int(v.size - tail_start))
        raise FitError("profile has isolated zero values; cannot fit a power law")
    keep, trimmed = _trim(t) if trim else (np.ones_like(t, dtype=bool), False)
    t, v = t[keep], v[keep]
    if model == "powerlog":
        # log log t needs t > 1
        t, v = t[t > 1.0], v[t > 1.0]
    if t.size < 4:
        raise FitError(f"need at least 4 positive points, got {t.size}")
    g, b, c, r = _fit_one(t, v, "power")
    chosen = "power"
    if model in ("powerlog", "auto") and (t > 1.0).all():
        g2, b2, c2, r2 = _fit_one(t, v, "powerlog")
        if model == "powerlog" or (r > RESIDUAL_FLOOR and r2 <= (1 - AUTO_IMPROVEMENT) * r):
            g, b, c, r, chosen = g2, b2, c2, r2, "powerlog"
    return ExponentFit(g, b, c, r, chosen, float(t[0]), float(t[-1]), int(t.size), trimmed)


class DecayExponentRegressor(RegressorMixin, BaseEstimator):
    """Estimator wrapper around :func:`fit_exponent`.

    ``fit(t, values)`` learns ``gamma_``, ``log_power_`` and ``amplitude_``;
    ``predict(t)`` evaluates the fitted law. :meth:`score` is the coefficient
    of determination in log space, where the fit is made.
    """

    def __init__(self, model: str = "auto", trim: bool = True):
        self.model = model
        self.trim = trim

    def fit(self, X, y):
        t = np.asarray(X, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        if t.shape != y.shape:
            raise DomainError("X must hold one t value per target")
        res = fit_exponent((t, y), self.model, self.trim)
        if isinstance(res, ZeroTail):
            raise FitError(f"profile vanishes from t = {res.onset:g} on; no decay law to fit")
        self.fit_ = res
        self.gamma_ = res.gamma
        self.log_power_ = res.log_power
        self.amplitude_ = res.amplitude
        self.model_ = res.model
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        return self.fit_.predict(np.asarray(X, dtype=float).reshape(-1))

    def score(self, X, y, sample_weight=None):
        check_is_fitted(self, "fit_")
        ly = np.log(np.asarray(y, dtype=float).reshape(-1))
        lp = np.log(self.predict(X))
        w = np.ones_like(ly) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        mean = np.average(ly, weights=w)
        ss_res = np.sum(w * (ly - lp) ** 2)
        ss_tot = np.sum(w * (ly - mean) ** 2)
        return 1.0 - ss_res / ss_tot if ss_tot > 0 else float(ss_res == 0)
