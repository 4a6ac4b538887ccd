import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmpda import EventSeries, GenerativeSpec, GMPDAConfig, generate, interval_histogram
from gmpda.candidates import explained_score, extract_candidates, tau
from gmpda.errors import ConfigError
from gmpda.intervals import denoised_histogram, estimate_z_hat


def denoised(series, max_lag=400):
    d = interval_histogram(series, min(max_lag, series.length))
    return denoised_histogram(d, estimate_z_hat(d, 4))


def grid_series(mu, n):
    return EventSeries.from_timestamps(mu * np.arange(1, n + 1), mu * (n + 1))


def test_tau_examples():
    h = np.zeros(30)
    h[7:12] = 1  # lags 8..12
    assert tau(10, 1, h) == 5
    assert tau(10, 1, np.zeros(30)) == 0
    spike = np.zeros(30)
    spike[9] = 7
    for sigma in (0.5, 1, 4, 20):
        assert tau(10, sigma, spike) == 7


def test_tau_ignores_out_of_range_lags():
    h = np.ones(5)
    assert tau(4, 3, h) == 5
    assert tau(40, 1, h) == 0


@given(st.lists(st.floats(0, 100), min_size=1, max_size=80), st.integers(1, 80),
       st.floats(0.5, 10))
def test_tau_is_a_window_sum(values, mu, sigma):
    h = np.array(values)
    w = max(1, int(np.floor(1.96 * sigma + 0.5)))
    lo, hi = max(mu - w, 1), min(mu + w, h.size)
    expected = h[lo - 1:hi].sum() if lo <= hi else 0.0
    assert tau(mu, sigma, h) == pytest.approx(expected)


# random-walk windows widen with the multiple, so on jitter-free data an
# overstated sigma lets nearby periods reach the far multiples; use the floor
@pytest.mark.parametrize("model, sigma", [("clock", 1.0), ("rw", 0.5)])
def test_period_beats_non_divisors(model, sigma):
    s = grid_series(10, 50)
    h = denoised(s)
    best = explained_score(10, sigma, h, model, s.length)
    for mu in range(5, 201):
        if 10 % mu != 0 and mu % 10 != 0:
            assert explained_score(mu, sigma, h, model, s.length) < best
    assert explained_score(20, sigma, h, model, s.length) < best


@pytest.mark.parametrize("model", ["clock", "rw"])
def test_zero_histogram_scores_zero(model):
    h = np.zeros(400)
    assert all(explained_score(mu, 2, h, model, 1000) == 0 for mu in range(5, 201))


def test_two_periods_within_two_iterations():
    s = generate(GenerativeSpec("clock", (10, 27), (0, 0), n=100, seed=0))
    ledger = extract_candidates(denoised(s), s.length, GMPDAConfig(model="clock", sigma_init=1))
    early = [c.period for c in ledger if c.iteration <= 2]
    assert any(abs(p - 10) <= 1 for p in early)
    assert any(abs(p - 27) <= 1 for p in early)


def test_empty_histogram_gives_empty_ledger():
    assert len(extract_candidates(np.zeros(400), 1000, GMPDAConfig())) == 0


def test_defaults():
    cfg = GMPDAConfig()
    assert (cfg.L_min, cfg.max_iterations, cfg.max_candidates) == (5, 5, 15)


def test_bad_range():
    with pytest.raises(ConfigError):
        GMPDAConfig(L_min=50, L_max=50)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["clock", "rw"]), st.integers(10, 150), st.integers(0, 2**31))
def test_ledger_invariants(model, mu, seed):
    s = generate(GenerativeSpec(model, (mu,), (np.log(mu),), n=60, beta=0.5, seed=seed))
    cfg = GMPDAConfig(model=model)
    h = denoised(s)
    ledger = extract_candidates(h, s.length, cfg)
    assert len(ledger) <= cfg.max_iterations * cfg.max_candidates
    for it in {c.iteration for c in ledger}:
        scores = [c.score for c in ledger.iteration(it)]
        assert scores == sorted(scores, reverse=True)
    assert all(cfg.L_min <= c.period <= cfg.L_max for c in ledger)
    again = extract_candidates(h, s.length, cfg)
    assert again.to_dict() == ledger.to_dict()


def test_true_period_ranks_first_on_clean_clock_data():
    rng = np.random.default_rng(0)
    hits = 0
    for mu in rng.integers(10, 200, size=100):
        s = generate(GenerativeSpec("clock", (int(mu),), (1,), n=50, seed=int(mu)))
        ledger = extract_candidates(denoised(s), s.length, GMPDAConfig(model="clock", sigma_init=1))
        hits += ledger.iteration(1)[0].period == mu
    assert hits >= 95
