import math

import numpy as np
import pytest
from sklearn.base import clone

from fourier_moduli import DecayExponentRegressor, DecayProfile, ExponentFit, FitError, ZeroTail, fit_exponent
from fourier_moduli import TailKind, corpus, tail_profile

T = 2.0 ** np.arange(2, 13)


def test_exact_power_law():
    fit = fit_exponent((T, 3 * T**-0.5), "auto")
    assert fit.model == "power"
    assert fit.gamma == pytest.approx(0.5, abs=1e-12)
    assert fit.log_power == 0.0
    assert fit.amplitude == pytest.approx(3.0, rel=1e-12)
    assert fit.max_rel_residual < 1e-12


def test_log_law_picks_powerlog():
    fit = fit_exponent((T, T**-1.0 * np.log(T) ** 0.5), "auto")
    assert fit.model == "powerlog"
    assert fit.gamma == pytest.approx(1.0, abs=0.02)
    assert fit.log_power == pytest.approx(0.5, abs=0.05)


def test_scale_invariance():
    v = T**-0.7 * np.log(T) ** 0.3 * (1 + 0.01 * np.sin(T))
    a = fit_exponent((T, v), "powerlog")
    b = fit_exponent((T, 17.0 * v), "powerlog")
    assert a.gamma == pytest.approx(b.gamma, abs=1e-12)
    assert a.log_power == pytest.approx(b.log_power, abs=1e-12)


def test_trimming():
    fit = fit_exponent((T, T**-1.0), "power")
    assert fit.trimmed and fit.t_min == 8 and fit.t_max == 2048
    short = fit_exponent((T[:4], T[:4] ** -1.0), "power")
    assert not short.trimmed and short.count == 4


def test_zero_tail_and_errors():
    v = np.where(T > 64, 0.0, 1 / T)
    z = fit_exponent((T, v))
    assert isinstance(z, ZeroTail) and z.onset == 128 and z.exact
    tiny = np.where(T > 64, 1e-20, 1 / T)
    assert not fit_exponent((T, tiny)).exact
    with pytest.raises(FitError):
        fit_exponent((T[:3], T[:3] ** -1.0))
    with pytest.raises(FitError):
        fit_exponent((T, np.where(T == 16, 0.0, 1 / T)))


def test_epsilon_profiles_fit_in_decay_variable():
    eps = 2.0 ** -np.arange(0, 8)[::-1]
    prof = DecayProfile(eps, 4 * eps, "epsilon")
    assert fit_exponent(prof, "power").gamma == pytest.approx(1.0, abs=1e-12)


def test_corpus_tail_fit():
    spec = corpus.make("powerlaw", {"d": 2, "alpha": 0.5})
    fit = fit_exponent(tail_profile(spec, TailKind.of("true", 2.0), "dyadic:1..2^10:11"))
    assert fit.gamma == pytest.approx(0.5, abs=0.01)


def test_to_dict_schema():
    d = fit_exponent((T, T**-1.0)).to_dict()
    assert set(d) == {"gamma", "log_power", "amplitude", "max_rel_residual", "model"}
    assert d["model"] == "PurePower"


def test_regressor_api():
    reg = DecayExponentRegressor(model="power")
    assert clone(reg).get_params() == {"model": "power", "trim": True}
    reg.fit(T.reshape(-1, 1), 2 * T**-1.5)
    assert reg.gamma_ == pytest.approx(1.5) and reg.amplitude_ == pytest.approx(2.0)
    assert np.allclose(reg.predict([10.0]), 2 * 10**-1.5)
    assert reg.score(T, 2 * T**-1.5) == pytest.approx(1.0)
    with pytest.raises(Exception):
        DecayExponentRegressor().predict(T)
    with pytest.raises(FitError):
        DecayExponentRegressor().fit(T, np.where(T > 8, 0.0, 1.0))
