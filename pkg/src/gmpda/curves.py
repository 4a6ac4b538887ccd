"""Expected interval-count curves for the Clock and Random Walk models.

For a period ``mu_p`` with spread ``sigma_p`` the m-th order intervals form a
Gaussian bump at ``m * mu_p`` of mass ``c_pm``. The Clock model keeps the
bump width at ``sigma_p``; the Random Walk model widens it to ``m * sigma_p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .events import EventSeries
from .models import Model

SIGMA_FLOOR = 0.5
# A term whose centre sits this many widths beyond the window is dropped.
TAIL_WIDTHS = 12.0

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def coverage(series: EventSeries, mu: float, sigma: float) -> float:
    """Sum of first-order gaps shorter than ``mu + 2 * sigma``.

    This is the part of the series on which period ``mu`` can actually show
    up; long silent stretches are left out.
    """
    gaps = series.first_order_intervals()
    return float(gaps[gaps < mu + 2.0 * sigma].sum())


def adjusted_scale(mu: float, m, cov: float) -> np.ndarray:
    """Mass ``cov / mu - (m - 1)`` of the m-th order bump, floored at 0."""
    return np.maximum(cov / mu - (np.asarray(m, dtype=float) - 1.0), 0.0)


@dataclass(frozen=True)
class CurveParams:
    """Periods, spreads and coverages defining a mixture curve ``G_M``.

    ``coverages`` defaults to ``length`` for every period (a gap-free series).
    """

    model: Model
    periods: tuple
    sigmas: tuple
    length: int
    coverages: Optional[tuple] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        object.__setattr__(self, "periods", tuple(float(p) for p in np.atleast_1d(self.periods)))
        object.__setattr__(self, "sigmas", tuple(float(s) for s in np.atleast_1d(self.sigmas)))
        if len(self.periods) != len(self.sigmas):
            raise ValueError("periods and sigmas must have equal length")
        if self.coverages is None:
            object.__setattr__(self, "coverages", (float(self.length),) * len(self.periods))
        else:
            object.__setattr__(self, "coverages", tuple(float(c) for c in self.coverages))

    @classmethod
    def for_series(cls, model, periods: Sequence[float], sigmas: Sequence[float],
                   series: EventSeries) -> "CurveParams":
        covs = tuple(coverage(series, mu, max(s, SIGMA_FLOOR)) for mu, s in zip(periods, sigmas))
        return cls(model, tuple(periods), tuple(sigmas), series.length, covs)


def component_curve(model: Model, mu: float, sigma: float, cov: float, length: int,
                    lags) -> np.ndarray:
    """Contribution of one period to ``G_M`` at ``lags``."""
    lags = np.asarray(lags, dtype=float)
    sigma = max(float(sigma), SIGMA_FLOOR)
    m_max = min(int(length // mu), int(np.ceil(cov / mu)))
    if m_max < 1 or lags.size == 0:
        return np.zeros(lags.shape)
    m = np.arange(1, m_max + 1, dtype=float)
    centres = m * mu
    widths = np.full_like(m, sigma) if model is Model.CLOCK else m * sigma
    keep = (centres - lags.max()) < TAIL_WIDTHS * widths
    m, centres, widths = m[keep], centres[keep], widths[keep]
    weights = adjusted_scale(mu, m, cov)
    z = (lags.reshape(-1, 1) - centres) / widths
    dens = np.exp(-0.5 * z * z) / (widths * _SQRT_2PI)
    return (dens * weights).sum(axis=1).reshape(lags.shape)


def curve(params: CurveParams, lags) -> np.ndarray:
    """``G_M`` summed over all periods of ``params``."""
    lags = np.asarray(lags, dtype=float)
    out = np.zeros(lags.shape)
    for mu, sigma, cov in zip(params.periods, params.sigmas, params.coverages):
        out += component_curve(params.model, mu, sigma, cov, params.length, lags)
    return out


def g_clock(params: CurveParams, lags) -> np.ndarray:
    return curve(replace(params, model=Model.CLOCK), lags)


def g_random_walk(params: CurveParams, lags) -> np.ndarray:
    return curve(replace(params, model=Model.RANDOM_WALK), lags)
