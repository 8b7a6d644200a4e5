import math

import numpy as np
import pytest

from fourier_moduli import (
    DomainError,
    GridSpec,
    RadialSpectrum,
    SampledField,
    Spectrum,
    dft,
    idft,
    lp_norm,
    sample_field,
    sample_spectrum,
    spectral_l2_norm,
    sphere_area,
)


def test_sphere_area_known_values():
    assert sphere_area(1) == 2.0
    assert sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert sphere_area(4) == pytest.approx(2 * math.pi**2, rel=1e-15)


@pytest.mark.parametrize("bad", [dict(dim=0, half_extent=1, samples=8), dict(dim=1, half_extent=-1, samples=8),
                                 dict(dim=1, half_extent=1, samples=7), dict(dim=1, half_extent=1, samples=2)])
def test_gridspec_rejects_bad_input(bad):
    with pytest.raises(DomainError):
        GridSpec(**bad)


def test_grid_geometry():
    g = GridSpec(2, 4.0, 16)
    assert g.spacing == 0.5
    assert g.nyquist == pytest.approx(2 * math.pi)
    assert g.axis_points[0] == pytest.approx(-3.75)
    assert g.axis_frequencies[g.samples // 2] == 0.0
    assert g.frequency_norm.shape == (16, 16)


def test_dft_of_gaussian_matches_continuum_transform():
    # f = exp(-x^2/2) has transform sqrt(2 pi) exp(-xi^2/2)
    g = GridSpec(1, 10.0, 256)
    f = sample_field(g, lambda x: np.exp(-x * x / 2))
    s = dft(f)
    xi = g.axis_frequencies
    assert np.max(np.abs(s.coeffs - math.sqrt(2 * math.pi) * np.exp(-xi * xi / 2))) < 1e-12


def test_dft_inverse_roundtrip_and_plancherel():
    rng = np.random.default_rng(7)
    g = GridSpec(2, 3.0, 32)
    f = SampledField(g, rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape))
    back = idft(dft(f))
    assert np.max(np.abs(back.values - f.values)) < 1e-12
    assert spectral_l2_norm(dft(f)) == pytest.approx(lp_norm(f, 2), rel=1e-12)


def test_lp_norms_of_indicator():
    g = GridSpec(1, 4.0, 64)
    f = sample_field(g, lambda x: (np.abs(x) <= 1).astype(float))
    assert lp_norm(f, 1) == pytest.approx(2.0)
    assert lp_norm(f, 2) == pytest.approx(math.sqrt(2.0))
    assert lp_norm(f, math.inf) == 1.0
    with pytest.raises(DomainError):
        lp_norm(f, 0.5)


def test_fields_are_immutable():
    g = GridSpec(1, 1.0, 8)
    f = SampledField(g, np.ones(8))
    with pytest.raises(ValueError):
        f.values[0] = 2.0


def test_radial_spectrum_support_and_sampling():
    spec = RadialSpectrum("box", 2, lambda r: np.ones_like(r), support_bound=2.0)
    assert spec(3.0) == 0.0 and spec(1.0) == 1.0
    s = sample_spectrum(spec, GridSpec(2, 8.0, 32))
    assert isinstance(s, Spectrum)
    assert np.all(s.coeffs[GridSpec(2, 8.0, 32).frequency_norm > 2.0] == 0)
    with pytest.raises(DomainError):
        sample_spectrum(spec, GridSpec(1, 8.0, 32))


def test_integrability():
    spec = RadialSpectrum("p", 2, lambda r: np.minimum(1.0, np.maximum(r, 1e-300) ** -1.5))
    assert spec.is_integrable(2.0)
    from fourier_moduli import PowerTail

    slow = RadialSpectrum("q", 2, lambda r: np.ones_like(r), power_tail=PowerTail(1.0, 1.0, 0.9))
    assert not slow.is_integrable(2.0)


def _unit_interval(N=4096):
    g = GridSpec(1, 16.0, N)
    return sample_field(g, lambda x: ((x >= 0) & (x <= 1)).astype(float))


def test_interval_transform_modulus():
    s = dft(_unit_interval())
    xi = s.grid.axis_frequencies
    k = int(np.argmin(np.abs(xi - math.pi)))
    assert xi[k] == pytest.approx(math.pi)
    assert s.power[k] == pytest.approx(4 * math.sin(xi[k] / 2) ** 2 / xi[k] ** 2, rel=1e-3)
    assert lp_norm(_unit_interval(), 2) == pytest.approx(1.0, abs=2 * 16.0 / 4096)


def test_closed_form_spectrum_recovers_interval_away_from_jumps():
    g = GridSpec(1, 16.0, 4096)
    xi = g.axis_frequencies
    # transform of the indicator of [0, 1]: (1 - e^{-i xi}) / (i xi), equal to 1 at xi = 0
    with np.errstate(invalid="ignore", divide="ignore"):
        coeffs = np.where(xi == 0, 1.0, (1 - np.exp(-1j * xi)) / (1j * xi))
    f = idft(Spectrum(g, coeffs))
    x = g.axis_points
    away = (np.abs(x) > 0.25) & (np.abs(x - 1) > 0.25)
    target = ((x >= 0) & (x <= 1)).astype(float)
    assert np.max(np.abs(f.values[away] - target[away])) < 1e-2
