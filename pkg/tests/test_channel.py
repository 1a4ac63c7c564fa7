import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thzassoc.channel import SPEED_OF_LIGHT, LinkBudgetParams, achievable_rate, fspl_db, mal_db, snr_db
from thzassoc.errors import ParameterError


def test_fspl_zero_at_unit_argument():
    f = 300e9
    assert fspl_db(f, SPEED_OF_LIGHT / (4 * math.pi * f)) == pytest.approx(0.0, abs=1e-9)


def test_fspl_300ghz_1m():
    # hand value: 20 log10(4 pi 3e11 / 3e8) = 81.9842
    assert fspl_db(300e9, 1.0) == pytest.approx(81.98, abs=0.01)


def test_fspl_decade_law():
    assert fspl_db(300e9, 10.0) == pytest.approx(fspl_db(300e9, 1.0) + 20.0, abs=1e-9)


@pytest.mark.parametrize("f,d", [(0, 1), (-1, 1), (1e9, 0), (1e9, -2)])
def test_fspl_rejects_non_positive(f, d):
    with pytest.raises(ParameterError):
        fspl_db(f, d)


def test_mal_values():
    assert mal_db(123.0, 0.0) == 0.0
    assert mal_db(0.0, 0.7) == 0.0
    assert mal_db(100.0, 0.01) == pytest.approx(4.3429, abs=1e-3)


def test_mal_rejects_negative():
    with pytest.raises(ParameterError):
        mal_db(-1.0, 0.1)
    with pytest.raises(ParameterError):
        mal_db(1.0, -0.1)


def test_rate_at_zero_snr_is_bandwidth():
    f = 300e9
    d = 1.0
    p = LinkBudgetParams(carrier_frequency=f, bandwidth=1e9, theta_db=fspl_db(f, d))
    assert achievable_rate(p, d) == pytest.approx(1e9, rel=1e-12)


def test_rate_reference_budget_at_one_metre(ref_params):
    assert snr_db(ref_params, 1.0) == pytest.approx(38.02, abs=0.01)
    assert achievable_rate(ref_params, 1.0) == pytest.approx(12.63e9, rel=1e-3)


def test_rate_vanishes_far_away(ref_params):
    assert achievable_rate(ref_params, 1e9) < 1e-3


def test_loss_additivity():
    p = LinkBudgetParams(absorption_coeff=0.05)
    d = np.linspace(0.5, 80, 50)
    assert np.allclose(p.theta_db - snr_db(p, d), fspl_db(p.carrier_frequency, d) + mal_db(d, p.absorption_coeff),
                       rtol=0, atol=1e-12)


def test_rate_monotone_random_pairs():
    rng = np.random.default_rng(1)
    p = LinkBudgetParams(absorption_coeff=0.02)
    d = rng.uniform(0, 200, size=(10_000, 2))
    d.sort(axis=1)
    r = achievable_rate(p, d)
    assert np.all(r[:, 0] >= r[:, 1])


@given(st.floats(0.0, 0.1, exclude_max=True))
def test_clamp_below_min_distance(d):
    p = LinkBudgetParams(min_distance=0.1)
    assert achievable_rate(p, d) == achievable_rate(p, 0.1)


@settings(max_examples=50)
@given(st.floats(-50, 300), st.floats(1e6, 1e10))
def test_rate_matches_shannon(theta, bw):
    p = LinkBudgetParams(theta_db=theta, bandwidth=bw)
    snr = theta - fspl_db(300e9, 5.0)
    expected = bw * math.log1p(10 ** (snr / 10)) / math.log(2)
    assert achievable_rate(p, 5.0) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("kw", [
    {"carrier_frequency": 0}, {"bandwidth": -1}, {"absorption_coeff": -0.1}, {"min_distance": 0},
])
def test_params_validation(kw):
    with pytest.raises(ParameterError):
        LinkBudgetParams(**kw)
