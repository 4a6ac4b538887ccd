import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmpda import CurveParams, EventSeries, g_clock, g_random_walk
from gmpda.curves import SIGMA_FLOOR, adjusted_scale, component_curve, coverage, curve

SQRT_2PI = math.sqrt(2 * math.pi)


def gaussian(x, centre, width):
    return math.exp(-0.5 * ((x - centre) / width) ** 2) / (width * SQRT_2PI)


def reference_curve(model, mu, sigma, length, lags):
    # direct double sum with full coverage; no truncation of m
    out = []
    for x in lags:
        total = 0.0
        for m in range(1, length // mu + 1):
            c = max(length / mu - (m - 1), 0.0)
            width = sigma if model == "clock" else m * sigma
            total += c * gaussian(x, m * mu, width)
        out.append(total)
    return np.array(out)


def test_clock_peak_value():
    p = CurveParams("clock", (100,), (2,), 1000)
    assert g_clock(p, [100])[0] == pytest.approx(10 / (2 * SQRT_2PI), rel=1e-6)
    assert g_clock(p, [100])[0] == pytest.approx(1.9947, abs=1e-4)


def test_random_walk_second_peak():
    p = CurveParams("rw", (100,), (2,), 1000)
    assert g_random_walk(p, [200])[0] == pytest.approx(9 / (4 * SQRT_2PI), rel=1e-6)
    assert g_random_walk(p, [200])[0] == pytest.approx(0.8976, abs=1e-4)


def test_first_terms_agree():
    p = CurveParams("rw", (100,), (2,), 1000)
    lags = np.arange(80, 121)
    assert np.allclose(g_clock(p, lags), g_random_walk(p, lags))


def test_peak_ratio():
    p = CurveParams("rw", (50,), (2,), 1000)
    c1, c2 = 20, 19
    ratio = g_random_walk(p, [100])[0] / g_random_walk(p, [50])[0]
    assert ratio == pytest.approx(c2 / (2 * c1), rel=1e-3)


def test_gaussian_tail():
    p = CurveParams("clock", (100,), (2,), 1000)
    for m in (1, 2, 3):
        for x in (m * 100 - 20, m * 100 + 20):
            assert component_curve(p.model, 100, 2, 1000, 1000, [x])[0] < 10 * 1e-20


@pytest.mark.parametrize("model", ["clock", "rw"])
def test_matches_reference(model):
    lags = np.arange(1, 401)
    p = CurveParams(model, (37,), (3.5,), 900)
    assert np.allclose(curve(p, lags), reference_curve(model, 37, 3.5, 900, lags), atol=1e-12)


@pytest.mark.parametrize("model", ["clock", "rw"])
def test_linear_in_periods(model):
    lags = np.arange(1, 401)
    both = curve(CurveParams(model, (20, 57), (1, 2), 2000), lags)
    parts = (curve(CurveParams(model, (20,), (1,), 2000), lags)
             + curve(CurveParams(model, (57,), (2,), 2000), lags))
    assert np.allclose(both, parts)


def test_random_walk_with_constant_width_is_clock():
    lags = np.arange(1, 401)
    p = CurveParams("clock", (40,), (3,), 1000)
    ref = reference_curve("clock", 40, 3, 1000, lags)
    assert np.allclose(g_clock(p, lags), ref, atol=1e-12)
    assert not np.allclose(g_random_walk(p, lags), ref)


@pytest.mark.parametrize("sigma", [1.0, 2.5, 6.0])
def test_term_mass(sigma):
    # one m = 1 bump summed over integer lags carries mass c_1
    mu, length = 60, 600
    lags = np.arange(1, 91)
    g = component_curve("clock", mu, sigma, length, length, lags)
    assert g.sum() == pytest.approx(length / mu, rel=0.01)


@given(st.sampled_from(["clock", "rw"]), st.floats(2, 300), st.floats(0, 50),
       st.integers(300, 5000))
def test_non_negative(model, mu, sigma, length):
    g = curve(CurveParams(model, (mu,), (sigma,), length), np.arange(1, 401))
    assert (g >= 0).all() and np.isfinite(g).all()


def test_sigma_floor():
    lags = np.arange(1, 50)
    a = curve(CurveParams("clock", (10,), (0,), 500), lags)
    b = curve(CurveParams("clock", (10,), (SIGMA_FLOOR,), 500), lags)
    assert np.allclose(a, b)


def test_continuous_in_sigma():
    lags = np.arange(1, 401)
    a = curve(CurveParams("rw", (50,), (3.0,), 1000), lags)
    b = curve(CurveParams("rw", (50,), (3.0 + 1e-7,), 1000), lags)
    assert np.abs(a - b).max() < 1e-6


def test_coverage_gap_free():
    s = EventSeries.from_timestamps(np.arange(10, 1001, 10), 1000)
    assert coverage(s, 10, 1) == pytest.approx(990)
    # first-order gaps span all but the lead-in before the first event
    assert coverage(s, 10, 1) / 10 == pytest.approx(adjusted_scale(10, 1, 990))


def test_coverage_excludes_long_gap():
    bout1 = np.arange(10, 501, 10)
    bout2 = bout1[-1] + 100 + np.arange(0, 491, 10)
    s = EventSeries.from_timestamps(np.concatenate([bout1, bout2]), 1200)
    gaps = s.first_order_intervals()
    assert gaps.max() == 100
    assert coverage(s, 10, 1) == pytest.approx(gaps.sum() - 100)


def test_adjusted_scale_floor():
    assert adjusted_scale(100, 1, 1000) == 10
    assert adjusted_scale(100, 10, 1000) == 1
    assert adjusted_scale(100, 12, 1000) == 0
    assert np.array_equal(adjusted_scale(100, np.array([11, 15]), 1000), [0, 0])


def test_curve_params_validation():
    with pytest.raises(ValueError):
        CurveParams("rw", (10, 20), (1,), 100)
    p = CurveParams("rw", 10, 1, 100)
    assert p.periods == (10.0,) and p.coverages == (100.0,)
