import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial
from scipy.special import j0

from fourier_moduli import BandLimitError, DomainError, GridSpec, TailKind, corpus, sample_spectrum
from fourier_moduli import bessel_tail, modified_tail, tail_many, tail_profile, true_tail

T = 2.0 ** np.arange(0, 11)


def test_powerlaw_true_tail_plane():
    spec = corpus.make("powerlaw", {"d": 2, "pprime": 2, "alpha": 0.5})
    got = tail_many(spec, TailKind.of("true", 2.0), T)
    assert np.allclose(got, math.sqrt(2 * math.pi) * T**-0.5, rtol=1e-12, atol=0)


def test_powerlaw_true_tail_space():
    # psi^2 = 4 pi t^{-2 alpha} / (2 alpha)
    spec = corpus.make("powerlaw", {"d": 3, "pprime": 2, "alpha": 0.7})
    got = tail_many(spec, TailKind.of("true", 2.0), T)
    assert np.allclose(got, math.sqrt(4 * math.pi / 1.4) * T**-0.7, rtol=1e-12, atol=0)


def _modified_oracle(d, alpha, m, t):
    # inner mass: cubic fill on [0, 1] integrated exactly, then the power law up to t
    s = d / 2 + alpha
    fill = Polynomial([1 + s / 3, 0, 0, -s / 3])
    inner0 = (fill**2 * Polynomial.basis(2 * m + d - 1)).integ()(1.0)
    e = 2 * m - 2 * s + d
    inner1 = math.log(t) if e == 0 else (t**e - 1) / e
    outer = t ** (-2 * alpha) / (2 * alpha)
    return math.sqrt(2 * math.pi * ((inner0 + inner1) * t ** (-2 * m) + outer)) if d == 2 else None


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.0])
def test_powerlaw_modified_tail_against_polynomial_oracle(alpha):
    spec = corpus.make("powerlaw", {"d": 2, "pprime": 2, "alpha": alpha})
    got = tail_many(spec, TailKind.of("modified", 2.0, 1), T)
    want = np.array([_modified_oracle(2, alpha, 1, t) for t in T])
    assert np.allclose(got, want, rtol=1e-9, atol=0)


def test_sup_tails():
    spec = corpus.make("powerlaw", {"d": 2, "pprime": math.inf, "alpha": 0.5})
    ts = np.array([1.0, 4.0, 32.0])
    assert np.allclose(tail_many(spec, TailKind.of("true", math.inf), ts), ts**-0.5, rtol=1e-12)
    assert np.allclose(tail_many(spec, TailKind.of("modified", math.inf, 1), ts), ts**-0.5, rtol=1e-9)
    # for alpha = 2 the weighted profile peaks inside the fill, at r^3 = 5/8
    steep = corpus.make("powerlaw", {"d": 2, "pprime": math.inf, "alpha": 2.0})
    peak = (5 / 8) ** (1 / 3) * 1.25
    assert np.allclose(tail_many(steep, TailKind.of("modified", math.inf, 1), ts), peak / ts, rtol=1e-9)


def test_compact_support():
    spec = corpus.make("bump", {"d": 2, "R": 4.0})
    ts = np.array([5.0, 10.0, 80.0])
    assert (tail_many(spec, TailKind.of("true", 2.0), ts) == 0).all()
    mod = tail_many(spec, TailKind.of("modified", 2.0, 1), ts)
    # beyond the support the modified tail is exactly c / t^m
    assert np.allclose(mod * ts, mod[0] * ts[0], rtol=1e-12)


def _discrete(spec, t, weight):
    r = spec.grid.frequency_norm
    return math.sqrt(np.sum(weight(r, t) * np.abs(spec.coeffs) ** 2) * spec.grid.frequency_cell_volume)


def test_grid_tails_match_brute_force_sums():
    f = corpus.make("ball", {"d": 2, "N": 128})
    from fourier_moduli import dft

    s = dft(f)
    for t in (1.0, 3.3, 12.0):
        assert true_tail(s, 2.0, t) == pytest.approx(_discrete(s, t, lambda r, t: r >= t), rel=1e-12)
        w = lambda r, t: np.where(r >= t, 1.0, (r / t) ** 2)
        assert modified_tail(s, 2.0, 1, t) == pytest.approx(_discrete(s, t, w), rel=1e-12)
        g = lambda r, t: 4 * math.pi * (1 - j0(r / t))
        assert bessel_tail(s, 2.0, 1, t) == pytest.approx(_discrete(s, t, g), rel=1e-9)


def test_grid_sup_tails_brute_force():
    s = sample_spectrum(corpus.make("powerlaw", {"d": 2, "pprime": math.inf, "alpha": 0.5}), GridSpec(2, 8.0, 64))
    r = s.grid.frequency_norm
    a = np.abs(s.coeffs)
    for t in (1.0, 5.0):
        assert tail_many(s, TailKind.of("true", math.inf), [t])[0] == a[r >= t].max()
        assert tail_many(s, TailKind.of("modified", math.inf, 1), [t])[0] == pytest.approx(
            (np.minimum(1, r / t) * a).max(), rel=1e-14)


def test_band_limit():
    s = corpus.make("gaussian", {"d": 1})
    from fourier_moduli import dft

    with pytest.raises(BandLimitError) as exc:
        true_tail(dft(s), 2.0, 1000.0)
    assert exc.value.t == 1000.0


def test_bessel_needs_plane_or_higher():
    spec = corpus.make("powerlaw", {"d": 1, "pprime": 2, "alpha": 0.5})
    with pytest.raises(DomainError):
        bessel_tail(spec, 2.0, 1, 1.0)
    with pytest.raises(DomainError):
        TailKind.of("bessel", math.inf)


def test_radial_bessel_far_field_converges():
    from fourier_moduli import tails

    spec = corpus.make("powerlaw", {"d": 2, "alpha": 0.5})
    base = bessel_tail(spec, 2.0, 1, 2.0)
    old = tails.BESSEL_FAR
    try:
        tails.BESSEL_FAR = 2 * old
        assert bessel_tail(spec, 2.0, 1, 2.0) == pytest.approx(base, rel=1e-5)
    finally:
        tails.BESSEL_FAR = old


def test_profile_and_ordering():
    spec = corpus.make("borderline", {"d": 2})
    prof = tail_profile(spec, TailKind.of("modified", 2.0, 1), "dyadic:1..2^8:9")
    true = tail_many(spec, TailKind.of("true", 2.0), prof.arguments)
    assert (true <= prof.values).all()
    assert (np.diff(prof.values) < 0).all()
    assert prof.role == "t"


def _unit_interval(N):
    g = GridSpec(1, 16.0, N)
    from fourier_moduli import sample_field

    return sample_field(g, lambda x: ((x >= 0) & (x <= 1)).astype(float))


def test_interval_tail_decays_like_four_over_t():
    from scipy.special import sici

    from fourier_moduli import dft

    s = dft(_unit_interval(16384))
    ts = np.array([64.0, 128.0, 256.0])
    psi2 = tail_many(s, TailKind.of("true", 2.0), ts) ** 2
    assert np.allclose(ts * psi2, 4.0, rtol=0.05)
    # continuum oracle: 2 int_t^inf 2 (1 - cos x) / x^2 dx via sine and cosine integrals
    si, _ = sici(ts)
    exact = 4 * (1 / ts - (np.cos(ts) / ts - (np.pi / 2 - si)))
    assert np.allclose(psi2, exact, rtol=0.03)
