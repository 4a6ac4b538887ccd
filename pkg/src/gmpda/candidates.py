"""Hierarchical extraction of candidate periods from a denoised histogram.

Each candidate period is scored by how much interval mass sits in windows
around its integer multiples. The best candidate's multiples are then cut out
of the histogram and the scan repeats on what is left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import GMPDAConfig
from .curves import SIGMA_FLOOR
from .errors import ConfigError
from .models import Model, SigmaSpec, resolve_sigma


@dataclass(frozen=True)
class Candidate:
    period: int
    score: float
    iteration: int
    sigma: float


@dataclass
class CandidateLedger:
    candidates: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    def periods(self) -> list[int]:
        return [c.period for c in self.candidates]

    def iteration(self, k: int) -> list[Candidate]:
        return [c for c in self.candidates if c.iteration == k]

    def to_dict(self) -> dict:
        return {
            "candidates": [
                {"period": c.period, "score": c.score, "iteration": c.iteration, "sigma": c.sigma}
                for c in self.candidates
            ],
            "config": dict(self.config),
        }


def _half_width(sigma: float) -> int:
    return max(1, int(math.floor(1.96 * sigma + 0.5)))


def _window_sums(prefix: np.ndarray, centres: np.ndarray, half: np.ndarray) -> np.ndarray:
    # prefix[k] = sum of hist over lags 1..k
    top = prefix.size - 1
    lo = np.clip(centres - half - 1, 0, top)
    hi = np.clip(centres + half, 0, top)
    return prefix[hi] - prefix[lo]


def tau(mu_hat: float, sigma: float, hist: np.ndarray, max_half: int = None) -> float:
    """Histogram mass within ``mu_hat +- round(1.96 sigma)``.

    ``hist[k]`` holds lag ``k + 1``; lags outside the array add nothing.
    ``max_half`` caps the half-width.
    """
    prefix = np.concatenate([[0.0], np.cumsum(hist, dtype=float)])
    centre = np.array([int(math.floor(mu_hat + 0.5))])
    half = _half_width(max(sigma, SIGMA_FLOOR))
    if max_half is not None:
        half = max(1, min(half, max_half))
    return float(_window_sums(prefix, centre, np.array([half]))[0])


def _max_half(mu: int) -> int:
    # windows around consecutive multiples of mu must not overlap
    return max(1, (int(mu) - 1) // 2)


def _growth(i, model):
    # spread of the i-th multiple relative to sigma; a random walk of i
    # independent steps has standard deviation sqrt(i) * sigma
    if model is Model.RANDOM_WALK:
        return np.sqrt(np.asarray(i, dtype=float))
    return np.ones(np.shape(i))


def _scores(prefix: np.ndarray, periods: np.ndarray, sigmas: np.ndarray,
            model: Model, length: int) -> np.ndarray:
    max_lag = prefix.size - 1
    out = np.zeros(periods.size)
    for k, (mu, sigma) in enumerate(zip(periods, sigmas)):
        n_mult = min(int(length // mu), int(max_lag // mu))
        if n_mult < 1:
            continue
        i = np.arange(1, n_mult + 1)
        widths = sigma * _growth(i, model)
        half = np.floor(1.96 * widths + 0.5).astype(np.int64)
        half = np.clip(half, 1, _max_half(mu))
        out[k] = mu / length * _window_sums(prefix, i * int(mu), half).sum()
    return out


def explained_score(mu_hat: int, sigma: float, hist: np.ndarray, model, length: int) -> float:
    """Share of the histogram explained by period ``mu_hat``.

    Sums the window mass around every multiple ``i * mu_hat`` that lies inside
    the histogram and scales by ``mu_hat / length``. Random-walk windows widen
    with ``sqrt(i)`` but stop short of the neighbouring multiple, so no interval is
    counted twice.
    """
    prefix = np.concatenate([[0.0], np.cumsum(hist, dtype=float)])
    return float(_scores(prefix, np.array([int(mu_hat)]),
                         np.array([max(sigma, SIGMA_FLOOR)]), Model.parse(model), length)[0])


def candidate_sigmas(periods: np.ndarray, sigma_init: SigmaSpec) -> np.ndarray:
    return np.array([max(resolve_sigma(sigma_init, float(mu)), SIGMA_FLOOR) for mu in periods])


def extract_candidates(hist: np.ndarray, length: int, config: GMPDAConfig,
                       sigma_init: SigmaSpec = None) -> CandidateLedger:
    """Run the extraction loop on a denoised histogram.

    Parameters
    ----------
    hist : ndarray
        Non-negative counts for lags ``1..len(hist)``.
    length : int
        Series length ``N_T``.
    config : GMPDAConfig
        Supplies ``L_min``, ``L_max``, ``max_iterations``, ``max_candidates``
        and the model.
    sigma_init : float or str, optional
        Overrides ``config.sigma_init``.
    """
    if config.L_min >= config.L_max:
        raise ConfigError("L_min must be < L_max")
    sigma_init = config.sigma_init if sigma_init is None else sigma_init
    model = config.model
    h = np.array(hist, dtype=float)
    max_lag = h.size
    periods = np.arange(config.L_min, min(config.L_max, max_lag) + 1)
    sigmas = candidate_sigmas(periods, sigma_init)
    ledger = CandidateLedger(config={
        "L_min": config.L_min,
        "L_max": config.L_max,
        "max_iterations": config.max_iterations,
        "max_candidates": config.max_candidates,
    })
    if periods.size == 0:
        return ledger

    for it in range(1, config.max_iterations + 1):
        total = h.sum()
        if total <= 0:
            break
        prefix = np.concatenate([[0.0], np.cumsum(h)])
        scores = _scores(prefix, periods, sigmas, model, length)
        # ties go to the smaller period
        order = np.lexsort((periods, -scores))
        top = [k for k in order[: config.max_candidates] if scores[k] > 0]
        if not top:
            break
        for k in top:
            ledger.candidates.append(Candidate(int(periods[k]), float(scores[k]), it, float(sigmas[k])))

        best, best_sigma = int(periods[top[0]]), sigmas[top[0]]
        for i in range(1, max_lag // best + 1):
            width = best_sigma * float(_growth(np.array([i]), model)[0])
            r = min(int(math.ceil(width)), _max_half(best))
            h[max(i * best - r - 1, 0): min(i * best + r, max_lag)] = 0.0
        if h.sum() >= total:
            break
    return ledger
