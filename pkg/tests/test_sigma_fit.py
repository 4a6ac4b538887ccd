import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmpda import GenerativeSpec, GMPDAConfig, empirical_loss, generate, interval_histogram
from gmpda.config import UNKNOWN_SIGMA
from gmpda.curves import SIGMA_FLOOR, CurveParams, coverage, curve
from gmpda.intervals import estimate_z_hat, residual_histogram
from gmpda.sigma_fit import fit_sigmas

LAGS = np.arange(1, 401)


@pytest.mark.parametrize("start", [1.0, 2.0, 8.0, 20.0])
def test_recovers_sigma_of_exact_curve(start):
    target = curve(CurveParams("rw", (50,), (4,), 2000), LAGS)
    fit = fit_sigmas(target, [50], [start], "rw", [2000], 2000)
    assert 3.9 <= fit.sigmas[0] <= 4.1
    assert fit.converged


def test_recovers_two_sigmas():
    target = curve(CurveParams("clock", (30, 77), (2, 5), 3000), LAGS)
    fit = fit_sigmas(target, [30, 77], [3, 3], "clock", [3000, 3000], 3000)
    assert fit.sigmas == pytest.approx((2, 5), abs=0.05)


def test_no_degradation_from_a_good_start():
    for seed in range(10):
        spec = GenerativeSpec("rw", (60,), (math.log(60),), n=100, seed=seed)
        s = generate(spec)
        d = interval_histogram(s, 400)
        noise = estimate_z_hat(d, 5)
        sigma0 = math.log(60)
        cov = coverage(s, 60, sigma0)
        fit = fit_sigmas(residual_histogram(d, noise), [60], [sigma0], "rw", [cov], s.length)
        before = empirical_loss(d, noise, CurveParams.for_series("rw", (60,), (sigma0,), s))
        after = empirical_loss(d, noise, CurveParams.for_series("rw", (60,), fit.sigmas, s))
        assert after <= 1.05 * before


def test_unknown_sigma_default():
    assert UNKNOWN_SIGMA == 2 == int(math.log(10))


def test_degenerate_target_is_skipped():
    target = np.zeros(400)
    target[49] = 3
    fit = fit_sigmas(target, [50], [3.0], "rw", [1000], 1000)
    assert not fit.converged and fit.sigmas == (3.0,)


def test_start_is_clipped_to_bounds():
    target = curve(CurveParams("rw", (20,), (2,), 1000), LAGS)
    fit = fit_sigmas(target, [20], [0.01], "rw", [1000], 1000)
    assert SIGMA_FLOOR <= fit.sigmas[0] <= 10


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["clock", "rw"]), st.integers(10, 150), st.floats(0.5, 15),
       st.floats(0.5, 30), st.integers(0, 2**31))
def test_fit_properties(model, mu, sigma, start, seed):
    rng = np.random.default_rng(seed)
    target = curve(CurveParams(model, (mu,), (sigma,), 3000), LAGS) + rng.normal(0, 0.05, LAGS.size)
    fit = fit_sigmas(target, [mu], [start], model, [3000], 3000)
    assert SIGMA_FLOOR <= fit.sigmas[0] <= mu / 2
    assert fit.residual_norm <= fit.initial_residual_norm + 1e-9
    again = fit_sigmas(target, [mu], [start], model, [3000], 3000)
    assert again == fit
