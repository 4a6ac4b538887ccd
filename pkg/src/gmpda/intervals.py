"""All-pairs interval histogram and the uniform interaction-interval model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .events import EventSeries


@dataclass(frozen=True)
class IntervalHistogram:
    """Counts of forward inter-event intervals.

    ``counts[mu - 1]`` is ``D(mu)``, the number of ordered event pairs
    ``s_j - s_i = mu`` for ``mu`` in ``[1, max_lag]``.
    """

    counts: np.ndarray
    max_lag: int
    length: int
    total_pairs: int

    @property
    def degenerate(self) -> bool:
        return self.total_pairs == 0

    @property
    def lags(self) -> np.ndarray:
        return np.arange(1, self.max_lag + 1)

    def __getitem__(self, mu: int) -> int:
        if not 1 <= mu <= self.max_lag:
            return 0
        return int(self.counts[mu - 1])


def interval_histogram(series: EventSeries, max_lag: Optional[int] = None) -> IntervalHistogram:
    """Histogram ``D(mu)`` of all forward pairwise intervals up to ``max_lag``.

    Works offset by offset: ``s[i+m] - s[i]`` grows with ``m`` for every ``i``,
    so the loop stops once the smallest ``m``-th order gap leaves the window.
    """
    max_lag = series.length if max_lag is None else int(max_lag)
    if not 1 <= max_lag <= max(series.length, 1):
        raise ConfigError(f"max_lag must lie in [1, {series.length}], got {max_lag}")
    s = series.timestamps
    counts = np.zeros(max_lag + 1, dtype=np.int64)
    for m in range(1, s.size):
        d = s[m:] - s[:-m]
        d = d[d <= max_lag]
        if d.size == 0:
            break
        counts += np.bincount(d, minlength=max_lag + 1)
    counts = counts[1:]
    counts.setflags(write=False)
    n = s.size
    return IntervalHistogram(counts, max_lag, series.length, n * (n - 1) // 2)


@dataclass(frozen=True)
class NoiseModel:
    """Linearly decaying count of interaction intervals, ``z_hat * (1 - mu / N_T)``."""

    z_hat: float
    length: int

    def expected(self, mu) -> np.ndarray:
        mu = np.maximum(np.asarray(mu, dtype=float), 0.0)
        return np.clip(self.z_hat * (1.0 - mu / self.length), 0.0, None)


def estimate_z_hat(hist: IntervalHistogram, z_min: int = 4) -> NoiseModel:
    """Average of ``D(1..z_min)``.

    Intervals shorter than the smallest plausible period are attributed to
    interaction between unrelated events; their mean level is the intercept
    of the noise curve.
    """
    if z_min < 1:
        raise ConfigError("z_min must be >= 1")
    if z_min > hist.max_lag:
        raise ConfigError(f"z_min={z_min} exceeds histogram max_lag={hist.max_lag}")
    return NoiseModel(float(hist.counts[:z_min].mean()), hist.length)


def expected_noise_count(n_events: int, length: int) -> float:
    """Intercept ``z = (n^2 - n) / (2 N_T)`` of the uniform interaction-interval model.

    This counts each unordered pair once at its signed difference, so only
    half of the pairs land on positive lags. The forward-interval histogram
    of ``n`` distinct uniform events averages ``n (n - 1) (N_T - mu) /
    (N_T (N_T - 1))``, roughly ``2 z (1 - mu / N_T)``. Detection never uses
    this value; ``z_hat`` is always estimated from the histogram.
    """
    return (n_events**2 - n_events) / (2.0 * length)


def zeta_expected(noise: NoiseModel, mu) -> np.ndarray:
    """Expected interaction-interval count at lag ``mu``; ``mu = 0`` gives ``z_hat``."""
    return noise.expected(mu)


def denoised_histogram(hist: IntervalHistogram, noise: NoiseModel) -> np.ndarray:
    """``max(0, D(mu) - E[zeta(mu)])`` over ``[1, max_lag]``."""
    return np.maximum(hist.counts - noise.expected(hist.lags), 0.0)


def residual_histogram(hist: IntervalHistogram, noise: NoiseModel) -> np.ndarray:
    """``D(mu) - E[zeta(mu)]`` without clamping; this is what curves are fit to."""
    return hist.counts - noise.expected(hist.lags)
