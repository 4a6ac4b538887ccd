import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmpda import EventSeries, GenerativeSpec, generate, run_baseline
from gmpda.baselines import (BASELINES, MAX_PERIOD, MIN_PERIOD, autocorrelation,
                             eperiodicity_detect, fft_detect)
from gmpda.errors import DegenerateSeriesError, ParameterError

SPECTRAL = ("fft", "acf", "hist")


def grid(mu, n, start=None, length=None):
    start = mu if start is None else start
    stamps = start + mu * np.arange(n)
    return EventSeries.from_timestamps(stamps, length or stamps[-1] + mu)


def two_periods():
    stamps = np.union1d(20 * np.arange(1, 101), 55 * np.arange(1, 101))
    return EventSeries.from_timestamps(stamps, 5600)


def test_band_defaults():
    assert (MIN_PERIOD, MAX_PERIOD) == (10, 350)


@pytest.mark.parametrize("method", BASELINES)
def test_single_period_top_one(method):
    res = run_baseline(method, grid(10, 100), 1)
    assert res.method == method
    assert abs(res.periods[0] - 10) <= 0.5


@pytest.mark.parametrize("method", BASELINES)
def test_empty_series_is_refused(method):
    with pytest.raises(DegenerateSeriesError):
        run_baseline(method, EventSeries.from_binary([0] * 500), 1)


@pytest.mark.parametrize("method", SPECTRAL)
def test_two_periods_in_top_two(method):
    res = run_baseline(method, two_periods(), 2)
    for mu in (20, 55):
        assert min(abs(p - mu) for p in res.periods) <= 1


def test_eperiodicity_noise_robust():
    top = 0
    for seed in range(100):
        s = generate(GenerativeSpec("clock", (10,), (0,), n=100, beta=0.5, seed=seed))
        top += eperiodicity_detect(s, 1).periods[0] == 10
    assert top >= 90


def test_eperiodicity_top_three():
    res = eperiodicity_detect(grid(10, 100), 3)
    # 20 covers every other lag, 15 the multiples of 30
    assert res.periods == (10.0, 20.0, 15.0)
    assert res.scores[0] == 100 * 99 / 2


def test_eperiodicity_counts_pairs():
    # three events at 20, 40, 60: pairs (20), (20), (40) all cover q = 20
    s = EventSeries.from_timestamps([20, 40, 60], 100)
    res = eperiodicity_detect(s, 1, min_period=15, max_period=30)
    assert res.periods == (20.0,) and res.scores == (3.0,)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(sorted(BASELINES)), st.integers(1, 6), st.integers(10, 200),
       st.floats(0, 2), st.integers(0, 2**31))
def test_returns_exactly_k(method, k, mu, beta, seed):
    s = generate(GenerativeSpec("rw", (mu,), (np.log(mu),), n=40, beta=beta, seed=seed))
    res = run_baseline(method, s, k)
    assert len(res.periods) == k == len(res.scores)
    assert all(MIN_PERIOD <= p <= MAX_PERIOD for p in res.periods)
    assert run_baseline(method, s, k) == res


@pytest.mark.parametrize("method", BASELINES)
def test_translation(method):
    base = grid(23, 60, start=30, length=2000)
    moved = grid(23, 60, start=230, length=2000)
    if method in ("hist", "eperiodicity"):
        assert run_baseline(method, base, 2) == run_baseline(method, moved, 2)
    else:
        a, b = run_baseline(method, base, 1), run_baseline(method, moved, 1)
        assert abs(a.periods[0] - b.periods[0]) <= 0.5


def test_bad_k():
    for k in (0, -1, 1.5):
        with pytest.raises(ParameterError):
            fft_detect(grid(10, 50), k)


def test_unknown_method():
    with pytest.raises(ParameterError):
        run_baseline("wavelet", grid(10, 50), 1)


def test_autocorrelation_is_biased():
    s = EventSeries.from_binary([1, 0, 1, 0])
    acf = autocorrelation(s)
    x = np.array([0.5, -0.5, 0.5, -0.5])
    expected = [np.dot(x[: 4 - k], x[k:]) / 4 for k in range(4)]
    assert np.allclose(acf, expected)
