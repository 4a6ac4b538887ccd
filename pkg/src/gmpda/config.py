"""Algorithm parameters for GMPDA."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

from .errors import ConfigError
from .models import Model, SigmaSpec, check_sigma_spec

# sigma guess when the spread is unknown: int(log(10)), the smallest test period
UNKNOWN_SIGMA = int(math.log(10))


@dataclass(frozen=True)
class GMPDAConfig:
    """Parameters of one detection run.

    Attributes
    ----------
    model : Model
        Interval model the curves assume.
    L_min, L_max : int
        Inclusive range of candidate periods.
    max_iterations, max_candidates : int
        Rounds of hierarchical extraction and candidates kept per round.
    loss_length : int
        Largest interval lag used for the histogram, curves and loss.
    max_periods : int
        Largest period combination searched.
    noise_range : int
        Lags ``1..noise_range`` estimate the interaction-interval level.
    tol : float
        A larger combination must lower the loss by more than this.
    curve_fit : bool
        Refine sigmas by bounded least squares.
    sigma_init : float or str
        Initial sigma for a candidate period; ``"log"`` or ``"mu/k"`` are
        evaluated per candidate.
    max_pool : int
        Distinct candidates entering the combination search.
    low_confidence_events : int
        Results from series with fewer events are flagged.
    """

    model: Model = Model.RANDOM_WALK
    L_min: int = 5
    L_max: int = 200
    max_iterations: int = 5
    max_candidates: int = 15
    loss_length: int = 400
    max_periods: int = 5
    noise_range: int = 5
    tol: float = 0.01
    curve_fit: bool = True
    sigma_init: SigmaSpec = "log"
    max_pool: int = 30
    low_confidence_events: int = 50

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        check_sigma_spec(self.sigma_init)
        if self.L_min < 2 or self.L_min >= self.L_max:
            raise ConfigError(f"need 2 <= L_min < L_max, got L_min={self.L_min}, L_max={self.L_max}")
        if self.loss_length < self.L_max:
            raise ConfigError("loss_length must be >= L_max")
        if self.max_iterations < 1 or self.max_candidates < 1:
            raise ConfigError("max_iterations and max_candidates must be >= 1")
        if self.max_periods < 1 or self.max_pool < 1:
            raise ConfigError("max_periods and max_pool must be >= 1")
        if not 1 <= self.noise_range <= self.loss_length:
            raise ConfigError("noise_range must lie in [1, loss_length]")
        if self.tol < 0:
            raise ConfigError("tol must be >= 0")

    @classmethod
    def real_data(cls, **overrides) -> "GMPDAConfig":
        """Conservative settings for recorded data."""
        base = dict(L_max=200, max_periods=5, tol=0.1)
        base.update(overrides)
        return cls(**base)

    @classmethod
    def benchmark(cls, n_periods: int = 1, **overrides) -> "GMPDAConfig":
        """Settings for synthetic suites with periods in ``[10, 350]``."""
        base = dict(L_max=350, max_periods=n_periods + 2, tol=0.01)
        base.update(overrides)
        return cls(**base)

    def replace(self, **changes) -> "GMPDAConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["model"] = self.model.value
        return d
