"""Integral moduli of continuity and Fourier-tail integrals on R^d.

The library samples functions on uniform grids (or takes radial spectra in
closed form), computes averaged moduli of continuity and the true, modified
and Bessel tails of the Fourier transform, fits decay laws to the resulting
profiles and checks two-sided estimates between them.
"""

__version__ = "0.1.0"

from .errors import BandLimitError, DomainError, FitError, FourierModuliError, NonFiniteError, RefusedCase
from .field import (
    GridSpec,
    PowerTail,
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
from .differences import DifferenceOrder, SnapWarning, delta, difference_multiplier, finite_difference, fractional_difference
from .kernel import GAlphaTable, g_alpha, g_alpha_mean, g_alpha_small_v_constant, kernel_bracket, kernel_table
from .profiles import DecayProfile, DyadicGrid
from .moduli import ResolutionWarning, SphereRule, omega, omega_profile, omega_sup, sphere_rule
from .tails import TailKind, TailVariant, bessel_tail, modified_tail, tail, tail_many, tail_profile, true_tail
from .fitting import DecayExponentRegressor, ExponentFit, ZeroTail, fit_exponent
from .analysis import (
    Direction,
    TransferLaw,
    VerificationReport,
    demo_gamma_two_failure,
    demo_one_dimensional_counterexample,
    transfer_predict,
    verify_bessel_comparability,
    verify_sandwich,
    verify_smoothness_equivalence,
    verify_tail_bound,
    verify_transfer,
    verify_two_sided_l2,
)
from . import corpus

__all__ = [name for name in dir() if not name.startswith("_")]
