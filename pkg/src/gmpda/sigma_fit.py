"""Bounded least-squares refinement of per-period spreads.

Periods and bump masses stay fixed; only the sigmas move, inside
``[SIGMA_FLOOR, mu / 2]``. A fit that ends worse than its starting point is
discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .curves import SIGMA_FLOOR, component_curve
from .models import Model

MAX_EVALS = 200


@dataclass(frozen=True)
class FitResult:
    sigmas: tuple
    converged: bool
    residual_norm: float
    initial_residual_norm: float
    n_evals: int


def _bounds(periods):
    lo = np.full(len(periods), SIGMA_FLOOR)
    hi = np.maximum(np.asarray(periods, dtype=float) / 2.0, SIGMA_FLOOR + 1e-6)
    return lo, hi


def fit_sigmas(target: np.ndarray, periods: Sequence[float], sigma_init: Sequence[float],
               model, coverages: Sequence[float], length: int) -> FitResult:
    """Fit sigmas so the mixture curve matches ``target``.

    Parameters
    ----------
    target : ndarray
        Interval counts minus the interaction-interval level for lags
        ``1..len(target)``.
    periods, sigma_init, coverages : sequence
        One entry per period. ``coverages`` fixes each period's bump masses.
    model : Model or str
    length : int
        Series length ``N_T``.
    """
    model = Model.parse(model)
    target = np.asarray(target, dtype=float)
    lags = np.arange(1, target.size + 1, dtype=float)
    lo, hi = _bounds(periods)
    x0 = np.clip(np.asarray(sigma_init, dtype=float), lo, hi)

    def resid(sig):
        g = np.zeros_like(target)
        for mu, s, cov in zip(periods, sig, coverages):
            g += component_curve(model, mu, s, cov, length, lags)
        return g - target

    r0 = resid(x0)
    norm0 = float(np.sqrt(r0 @ r0))
    if np.count_nonzero(target > 0) < 3:
        return FitResult(tuple(x0), False, norm0, norm0, 1)

    try:
        sol = least_squares(resid, x0, bounds=(lo, hi), method="trf", max_nfev=MAX_EVALS,
                            x_scale="jac")
    except (ValueError, np.linalg.LinAlgError):
        return FitResult(tuple(x0), False, norm0, norm0, 1)

    norm = float(np.sqrt(2.0 * sol.cost))
    if not sol.success or norm > norm0:
        return FitResult(tuple(x0), False, norm0, norm0, int(sol.nfev))
    return FitResult(tuple(float(s) for s in sol.x), True, norm, norm0, int(sol.nfev))
