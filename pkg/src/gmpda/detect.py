"""Loss evaluation, combination search and the full detection pipeline."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .candidates import CandidateLedger, extract_candidates
from .config import GMPDAConfig
from .curves import SIGMA_FLOOR, CurveParams, component_curve, coverage, curve
from .errors import DegenerateSeriesError, TooFewEventsError
from .events import EventSeries
from .intervals import (IntervalHistogram, NoiseModel, denoised_histogram, estimate_z_hat,
                        interval_histogram)
from .models import resolve_sigma
from .sigma_fit import fit_sigmas

MIN_EVENTS = 4
SCHEMA_VERSION = 1
_CHUNK = 1 << 20  # floats per evaluation block
_TABLE_PER_SIZE = 5
# largest divisor j used for the q / j pool entries
SUBHARMONICS = 4
_SUBHARMONIC_SOURCES = 10
_REFINE_PASSES = 5


def loss_scale(counts: np.ndarray, resid: np.ndarray) -> float:
    """Normaliser of the loss: ``sum |D - zeta|``, or ``sum D`` if that is zero.

    Dividing by the structure left after removing interaction intervals makes
    the loss the share of that structure the curves fail to explain. A
    noise-only model scores 1 whatever the event density.
    """
    total = float(np.sum(counts))
    if total <= 0:
        raise DegenerateSeriesError("no intervals inside the loss window")
    structure = float(np.abs(resid).sum())
    return structure if structure > 0 else total


def empirical_loss(hist: IntervalHistogram, noise: NoiseModel, params: Optional[CurveParams],
                   loss_length: Optional[int] = None) -> float:
    """Normalised misfit ``sum |D - zeta - G| / sum |D - zeta|`` over lags ``1..loss_length``.

    ``params=None`` evaluates the noise-only model. See :func:`loss_scale`.
    """
    L = hist.max_lag if loss_length is None else min(int(loss_length), hist.max_lag)
    lags = np.arange(1, L + 1)
    d = hist.counts[:L].astype(float)
    resid = d - noise.expected(lags)
    scale = loss_scale(d, resid)
    g = curve(params, lags) if params is not None else 0.0
    return float(np.abs(resid - g).sum() / scale)


@dataclass
class DetectionResult:
    """Outcome of one detection run."""

    periods: tuple
    sigmas: tuple
    loss: float
    z_hat: float
    ledger: CandidateLedger
    combinations: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    n_events: int = 0
    length: int = 0
    low_confidence: bool = False
    fit_converged: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "periods": [float(p) for p in self.periods],
            "sigmas": [float(s) for s in self.sigmas],
            "loss": float(self.loss),
            "z_hat": float(self.z_hat),
            "n_events": int(self.n_events),
            "length": int(self.length),
            "low_confidence": bool(self.low_confidence),
            "fit_converged": self.fit_converged,
            "combinations": self.combinations,
            "ledger": self.ledger.to_dict(),
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _radius(mu: int, sigma_init) -> int:
    return max(1, int(math.floor(resolve_sigma(sigma_init, mu) + 0.5)))


def candidate_pool(ledger: CandidateLedger, max_pool: int, sigma_init="log",
                   L_min: int = 2, subharmonics: int = SUBHARMONICS) -> list[list[int]]:
    """Group ledger periods into clusters for the combination search.

    Periods are visited by rank, interleaving iterations (rank 1 of every
    iteration, then rank 2, ...). A period within one sigma of an existing
    cluster's representative joins that cluster; otherwise it opens a new
    one, until ``max_pool`` clusters exist. The integer fractions
    ``q / j`` (``j = 2..subharmonics``) of the ten leading representatives
    are added as extra clusters, since a short train of a small period can
    be outscored by its own multiples.
    """
    by_iter: dict[int, list[int]] = {}
    for c in ledger:
        by_iter.setdefault(c.iteration, []).append(c.period)
    clusters: list[list[int]] = []
    depth = max((len(v) for v in by_iter.values()), default=0)

    def home(q):
        for members in clusters:
            if abs(q - members[0]) <= _radius(members[0], sigma_init):
                return members
        return None

    for rank in range(depth):
        for it in sorted(by_iter):
            periods = by_iter[it]
            if rank >= len(periods):
                continue
            q = periods[rank]
            members = home(q)
            if members is not None:
                if q not in members:
                    members.append(q)
            elif len(clusters) < max_pool:
                clusters.append([q])

    for rep in [c[0] for c in clusters[:_SUBHARMONIC_SOURCES]]:
        for j in range(2, subharmonics + 1):
            q = int(math.floor(rep / j + 0.5))
            if q >= L_min and home(q) is None:
                clusters.append([q])
    return clusters


def _best_of_size(resid: np.ndarray, curves: np.ndarray, k: int, total: float):
    """Lowest-loss k-subset of the rows of ``curves`` plus a short table."""
    n, L = curves.shape
    best_loss, best_idx = math.inf, None
    table: list[tuple[float, tuple]] = []
    block = max(1, _CHUNK // (L * k))
    combos = itertools.combinations(range(n), k)
    while True:
        chunk = list(itertools.islice(combos, block))
        if not chunk:
            break
        idx = np.asarray(chunk)
        g = curves[idx].sum(axis=1)
        losses = np.abs(resid - g).sum(axis=1) / total
        order = np.argsort(losses, kind="stable")[:_TABLE_PER_SIZE]
        table.extend((float(losses[j]), chunk[j]) for j in order)
        j = int(order[0])
        if losses[j] < best_loss:
            best_loss, best_idx = float(losses[j]), chunk[j]
    table.sort(key=lambda t: t[0])
    return best_loss, best_idx, table[:_TABLE_PER_SIZE]


class _Components:
    """Per-period sigma, coverage and curve, computed once per period."""

    def __init__(self, resid, lags, series, config):
        self.resid, self.lags, self.series, self.config = resid, lags, series, config
        self._cache: dict[int, tuple] = {}

    def __call__(self, mu: int) -> tuple:
        if mu not in self._cache:
            cfg, series = self.config, self.series
            sigma = max(resolve_sigma(cfg.sigma_init, mu), SIGMA_FLOOR)
            if cfg.curve_fit:
                fit = fit_sigmas(self.resid, [mu], [sigma], cfg.model,
                                 [coverage(series, mu, sigma)], series.length)
                sigma = fit.sigmas[0]
            cov = coverage(series, mu, sigma)
            g = component_curve(cfg.model, mu, sigma, cov, series.length, self.lags)
            self._cache[mu] = (sigma, cov, g)
        return self._cache[mu]


def _refine(periods: list[int], comps: _Components, total: float, L_min: int, L_max: int):
    """Move each period to the integer within one sigma that lowers the loss most.

    Sweeps over the periods until a full pass changes nothing.
    """
    resid = comps.resid
    periods = list(periods)
    g = sum(comps(p)[2] for p in periods)
    loss = float(np.abs(resid - g).sum() / total)
    for _ in range(_REFINE_PASSES):
        moved = False
        for k, p in enumerate(periods):
            r = _radius(p, comps.config.sigma_init)
            rest = g - comps(p)[2]
            for q in range(max(L_min, p - r), min(L_max, p + r) + 1):
                if q == p or q in periods:
                    continue
                trial = float(np.abs(resid - rest - comps(q)[2]).sum() / total)
                if trial < loss:
                    loss, p, moved = trial, q, True
            periods[k] = p
            g = rest + comps(p)[2]
        if not moved:
            break
    return periods, loss


def search_combinations(ledger: CandidateLedger, hist: IntervalHistogram, noise: NoiseModel,
                        series: EventSeries, config: GMPDAConfig) -> DetectionResult:
    """Pick the period combination with the lowest loss.

    Every subset of cluster representatives up to ``config.max_periods``
    periods is scored. Subsets are compared size by size and a larger one
    replaces the incumbent only if it lowers the loss by more than
    ``config.tol``. The winning periods are then moved to the best integer
    nearby. With curve fitting on, each period's sigma is fitted on its own
    first and the final combination is refitted jointly.
    """
    L = hist.max_lag
    lags = np.arange(1, L + 1, dtype=float)
    d = hist.counts.astype(float)
    resid = d - noise.expected(lags)
    total = loss_scale(d, resid)
    model, length = config.model, series.length
    comps = _Components(resid, lags, series, config)

    clusters = candidate_pool(ledger, config.max_pool, config.sigma_init, config.L_min)
    # a cluster is represented by the member that fits the histogram best on its own
    reps = [min(c, key=lambda q: (float(np.abs(resid - comps(q)[2]).sum()), q)) for c in clusters]
    curves = np.array([comps(mu)[2] for mu in reps])

    table = []
    incumbent = None
    for k in range(1, min(config.max_periods, len(reps)) + 1):
        loss_k, idx, rows = _best_of_size(resid, curves, k, total)
        table.extend({"periods": [reps[i] for i in combo], "loss": loss}
                     for loss, combo in rows)
        if incumbent is None or loss_k < incumbent[0] - config.tol:
            incumbent = (loss_k, idx)

    periods, loss = _refine([reps[i] for i in incumbent[1]], comps, total,
                            config.L_min, config.L_max)
    periods = tuple(periods)
    chosen = tuple(comps(p)[0] for p in periods)
    converged = None
    if config.curve_fit:
        fit = fit_sigmas(resid, periods, chosen, model, [comps(p)[1] for p in periods], length)
        converged = fit.converged
        params = CurveParams.for_series(model, periods, fit.sigmas, series)
        refit_loss = empirical_loss(hist, noise, params)
        if refit_loss <= loss:
            loss, chosen = refit_loss, tuple(fit.sigmas)

    return DetectionResult(
        periods=periods,
        sigmas=chosen,
        loss=loss,
        z_hat=noise.z_hat,
        ledger=ledger,
        combinations=table,
        config=config.to_dict(),
        n_events=len(series),
        length=length,
        fit_converged=converged,
    )


def detect(series: EventSeries, config: Optional[GMPDAConfig] = None,
           reference_loss: Optional[float] = None) -> DetectionResult:
    """Detect the prime periods of ``series``.

    Builds the interval histogram up to ``loss_length``, removes the
    interaction-interval level, extracts candidates, and searches the
    candidate combinations for the lowest loss.

    Raises
    ------
    TooFewEventsError
        If the series has fewer than four events.
    DegenerateSeriesError
        If no interval falls inside the loss window.
    """
    config = GMPDAConfig() if config is None else config
    if len(series) < MIN_EVENTS:
        raise TooFewEventsError(f"too few events: {len(series)} < {MIN_EVENTS}")
    max_lag = min(config.loss_length, series.length)
    hist = interval_histogram(series, max_lag)
    noise = estimate_z_hat(hist, min(config.noise_range, max_lag))
    ledger = extract_candidates(denoised_histogram(hist, noise), series.length, config)

    if len(ledger) == 0:
        result = DetectionResult(
            periods=(), sigmas=(), loss=empirical_loss(hist, noise, None),
            z_hat=noise.z_hat, ledger=ledger, config=config.to_dict(),
            n_events=len(series), length=series.length,
        )
    else:
        result = search_combinations(ledger, hist, noise, series, config)

    result.low_confidence = (
        not result.periods
        or len(series) < config.low_confidence_events
        or (reference_loss is not None and result.loss >= reference_loss)
    )
    return result
