import json
import math

import numpy as np
import pytest

from fourier_moduli import DecayProfile, DomainError, GridSpec, RefusedCase, SampledField, corpus
from fourier_moduli.analysis import (
    TransferLaw,
    VerificationReport,
    default_t_grid,
    demo_one_dimensional_counterexample,
    sin_lower_bound_holds,
    transfer_predict,
    verify_bessel_comparability,
    verify_sandwich,
    verify_smoothness_equivalence,
    verify_tail_bound,
    verify_transfer,
    verify_two_sided_l2,
)
from fourier_moduli import TailKind, tail_profile


@pytest.mark.parametrize("args,expected", [
    ((0.5, 1, 2.0, "TrueToModified"), (0.5, 0.0)),
    ((1.0, 1, 2.0, "TrueToModified"), (1.0, 0.5)),
    ((1.0, 1, 4.0, "TrueToModified"), (1.0, 0.25)),
    ((3.0, 2, 2.0, "TrueToModified"), (2.0, 0.0)),
    ((1.0, 1, math.inf, "TrueToModified"), (1.0, 0.0)),
    ((0.5, 1, math.inf, "ModifiedToTrue"), (0.5, 0.0)),
])
def test_transfer_table(args, expected):
    law = transfer_predict(*args)
    assert (law.exponent, law.log_power) == expected


def test_transfer_zero_bound():
    law = transfer_predict(2.0, 1.0, math.inf, "ModifiedToTrue")
    assert law.zero_bound and law.to_dict() == {"law": "ZeroBound"}
    assert transfer_predict(0.5, 1.0, 2.0, "ModifiedToTrue").two_sided is False
    with pytest.raises(DomainError):
        transfer_predict(0.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        transfer_predict(1.0, 1.0, 2.0, "sideways")


def test_sandwich_exact_law():
    t = 2.0 ** np.arange(0, 8)
    rep = verify_sandwich(DecayProfile(t, 1 / t), (1.0, 0.0))
    assert rep.passed and rep.lower_constant == pytest.approx(1) and rep.upper_constant == pytest.approx(1)


def test_sandwich_log_law_restricts_grid():
    t = 2.0 ** np.arange(0, 8)
    rep = verify_sandwich(DecayProfile(t, np.log(t + 1) / t), {"gamma": 1.0, "log_power": 1.0})
    assert rep.t_min == 2 and any("t >= 2" in n for n in rep.notes)


def test_sandwich_powerlaw_modified_tail():
    spec = corpus.make("powerlaw", {"d": 2, "alpha": 0.5})
    prof = tail_profile(spec, TailKind.of("modified", 2.0, 1), "dyadic:1..2^10:11")
    rep = verify_sandwich(prof, (0.5, 0.0))
    assert rep.passed and rep.ratio < 4


def test_sandwich_compact_support_modified_tail():
    spec = corpus.make("bump", {"d": 2, "R": 4.0})
    prof = tail_profile(spec, TailKind.of("modified", 2.0, 1), "dyadic:4..2^8:7")
    rep = verify_sandwich(prof, (1.0, 0.0))
    assert rep.passed and rep.ratio < 2


def test_report_invariant_and_json():
    with pytest.raises(ValueError):
        VerificationReport("x", 0.0, 1.0, True, 1, 2, 2)
    rep = VerificationReport("x", 1.0, 2.0, True, 1.0, 4.0, 3, None, ["n"], {"arr": np.array([1.0, np.inf])})
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["grid"] == {"t_min": 1.0, "t_max": 4.0, "count": 3}
    assert d["details"]["arr"] == [1.0, None]


def test_sin_bound_spot_checks():
    assert all(sin_lower_bound_holds(u) for u in (0.5, math.pi, 10.0, 1e-6, 2.0))


def test_tail_bound_gaussian_plane():
    f = corpus.make("gaussian", {"d": 2, "N": 512})
    rep = verify_tail_bound(f, 2.0, 1, "dyadic:1..2^6:7")
    assert rep.passed and rep.ratio <= 2
    lo, hi = rep.details["kernel_bracket"]
    assert lo <= rep.lower_constant and rep.upper_constant <= hi


def test_tail_bound_p_one_and_between():
    f = corpus.make("gaussian", {"d": 2, "sigma": 0.5, "L": 4, "N": 256})
    rep = verify_tail_bound(f, 1.0, 1, "dyadic:2..2^4:4")
    assert rep.passed and all(rep.details["sin_lower_bound"].values())
    assert verify_tail_bound(f, 1.5, 1, "dyadic:2..2^4:4").passed


def test_line_is_refused():
    f = corpus.make("ball", {"d": 1})
    with pytest.raises(RefusedCase, match="d1-counterexample"):
        verify_tail_bound(f)
    with pytest.raises(RefusedCase):
        verify_two_sided_l2(f)


def test_two_sided_gaussian_space_and_zero_field():
    rep = verify_two_sided_l2(corpus.make("gaussian", {"d": 3}), 1)
    assert rep.passed
    zero = SampledField(GridSpec(2, 4.0, 32), np.zeros((32, 32)))
    z = verify_two_sided_l2(zero, 1, [2.0, 4.0])
    assert z.passed and z.lower_constant == 1 and "0 <= 0 <= 0" in z.notes[0]


def test_bessel_comparability_radial():
    rep = verify_bessel_comparability(corpus.make("powerlaw", {"d": 2, "alpha": 0.5}), 2.0, 1)
    assert rep.passed and rep.t_min == 1 and rep.t_max == 256


def test_transfer_borderline_four():
    rep = verify_transfer(corpus.make("borderline", {"d": 2, "pprime": 4.0}), 1.0, 1, 4.0)
    assert rep.fit.log_power == pytest.approx(0.25, abs=0.1)


def test_smoothness_refusals():
    f = corpus.make("ball", {"d": 2, "N": 64})
    with pytest.raises(RefusedCase, match="gamma2-failure"):
        verify_smoothness_equivalence(f, 2.0)
    rep = verify_smoothness_equivalence(corpus.make("gaussian", {"d": 2}), 1.0)
    assert not rep.passed and any("ZeroBound" in n for n in rep.notes)


def test_smoothness_interval_closed_forms():
    f = corpus.make("ball", {"d": 1, "r": 0.5, "L": 16, "N": 16384})
    rep = verify_smoothness_equivalence(f, 1.0)
    assert rep.passed
    assert rep.details["modulus_fit"].gamma == pytest.approx(1.0, abs=1e-9)
    assert rep.details["tail_fit"].gamma == pytest.approx(1.0, abs=0.05)
    # omega^2 = 4 eps exactly
    assert rep.details["modulus_side"].lower_constant == pytest.approx(4.0, rel=1e-10)


def test_counterexample_validation():
    with pytest.raises(DomainError):
        demo_one_dimensional_counterexample([0.5])
    with pytest.raises(DomainError):
        demo_one_dimensional_counterexample([0.05, 0.2])


def test_default_grid_is_clipped_to_band():
    f = corpus.make("gaussian", {"d": 2})
    ts = default_t_grid(f)
    assert ts[0] == 2 and ts[-1] <= 0.8 * f.grid.nyquist
