"""Synthetic event series under the Clock and Random Walk models.

Continuous Gaussian draws are rounded to the nearest tick. Each period places
``n`` events; the series length is ``max_p(alpha_p + (n + 1) * mu_p)`` so every
period contributes roughly ``n`` events. Uniform false-positive noise is added
afterwards at ``round(beta * |S|)`` events.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import ConfigError, ParameterError
from .events import EventSeries
from .models import Model, SigmaSpec, check_sigma_spec, resolve_sigma

MAX_RESAMPLE = 100

GRID_SIGMAS: tuple[SigmaSpec, ...] = (1, "log", "mu/16", "mu/8", "mu/4", "mu/3")
GRID_NS: tuple[int, ...] = (10, 30, 50, 100, 300, 500)
GRID_BETAS: tuple[float, ...] = (0, 0.1, 0.5, 0.7, 1, 2, 4, 8)
GRID_PERIOD_COUNTS: tuple[int, ...] = (1, 2, 3)


def _round_half_up(x):
    return np.floor(np.asarray(x, dtype=float) + 0.5).astype(np.int64)


@dataclass(frozen=True)
class GenerativeSpec:
    """Parameters of one synthetic series.

    Parameters
    ----------
    model : Model
        Clock or random walk.
    periods, sigmas : tuple
        Period ``mu_p`` (ticks, >= 2) and interval standard deviation
        ``sigma_p`` (ticks, >= 0) for each component.
    n : int
        Events placed per period.
    beta : float
        Noise events per periodic event.
    offsets : tuple, optional
        Start ``alpha_p`` of each period; zeros by default.
    seed : int
        Seed of the draw.
    sigma_label : str, optional
        Symbolic sigma spec the sigmas were derived from (bookkeeping only).
    """

    model: Model
    periods: tuple
    sigmas: tuple
    n: int
    beta: float = 0.0
    offsets: tuple = ()
    seed: int = 0
    sigma_label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        periods = tuple(int(p) for p in np.atleast_1d(self.periods))
        sigmas = tuple(float(s) for s in np.atleast_1d(self.sigmas))
        offsets = tuple(int(a) for a in np.atleast_1d(self.offsets)) or (0,) * len(periods)
        object.__setattr__(self, "periods", periods)
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "offsets", offsets)
        if not periods:
            raise ParameterError("at least one period is required")
        if not (len(periods) == len(sigmas) == len(offsets)):
            raise ParameterError("periods, sigmas and offsets must have equal length")
        if min(periods) < 2:
            raise ParameterError("periods must be >= 2")
        if min(sigmas) < 0:
            raise ParameterError("sigmas must be >= 0")
        if min(offsets) < 0:
            raise ParameterError("offsets must be >= 0")
        if self.n < 1:
            raise ParameterError("n must be >= 1")
        if self.beta < 0:
            raise ParameterError("beta must be >= 0")

    @property
    def length(self) -> int:
        return max(a + (self.n + 1) * mu for a, mu in zip(self.offsets, self.periods))


def _clock_component(mu, sigma, alpha, n, rng) -> np.ndarray:
    i = np.arange(1, n + 1)
    return _round_half_up(alpha + i * mu + rng.normal(0.0, sigma, size=n))


def _walk_component(mu, sigma, alpha, n, rng) -> np.ndarray:
    steps = _round_half_up(mu + rng.normal(0.0, sigma, size=n))
    for _ in range(MAX_RESAMPLE):
        bad = steps <= 0
        if not bad.any():
            break
        steps[bad] = _round_half_up(mu + rng.normal(0.0, sigma, size=int(bad.sum())))
    else:
        raise ParameterError(
            f"random walk step stayed non-positive after {MAX_RESAMPLE} resamples "
            f"(mu={mu}, sigma={sigma})"
        )
    return alpha + np.cumsum(steps)


def _periodic_events(spec: GenerativeSpec, rng: np.random.Generator) -> EventSeries:
    length = spec.length
    component = _clock_component if spec.model is Model.CLOCK else _walk_component
    parts = []
    for mu, sigma, alpha in zip(spec.periods, spec.sigmas, spec.offsets):
        s = component(mu, sigma, alpha, spec.n, rng)
        parts.append(s[(s >= 1) & (s <= length)])
    return EventSeries.from_timestamps(np.concatenate(parts), length)


def inject_noise(series: EventSeries, beta: float, seed=None,
                 n_periodic: Optional[int] = None) -> EventSeries:
    """Add ``round(beta * n_periodic)`` uniform events on free ticks.

    ``n_periodic`` defaults to ``len(series)``. Noise never lands on an
    occupied tick, so the result grows by exactly the requested count unless
    the series runs out of free ticks.
    """
    if beta < 0:
        raise ParameterError("beta must be >= 0")
    n_periodic = len(series) if n_periodic is None else n_periodic
    count = int(_round_half_up(beta * n_periodic))
    if count == 0:
        return series
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    free = np.setdiff1d(np.arange(1, series.length + 1), series.timestamps, assume_unique=True)
    count = min(count, free.size)
    noise = rng.choice(free, size=count, replace=False)
    return EventSeries.from_timestamps(np.concatenate([series.timestamps, noise]), series.length)


def generate(spec: GenerativeSpec) -> EventSeries:
    """Draw the series described by ``spec`` (either model)."""
    rng = np.random.default_rng(spec.seed)
    periodic = _periodic_events(spec, rng)
    return inject_noise(periodic, spec.beta, rng)


def generate_clock(spec: GenerativeSpec) -> EventSeries:
    if spec.model is not Model.CLOCK:
        raise ParameterError("generate_clock needs a clock spec")
    return generate(spec)


def generate_random_walk(spec: GenerativeSpec) -> EventSeries:
    if spec.model is not Model.RANDOM_WALK:
        raise ParameterError("generate_random_walk needs a random-walk spec")
    return generate(spec)


# --- test-suite grids ------------------------------------------------------

@dataclass(frozen=True)
class SuiteGrid:
    """Cartesian grid of synthetic test cells.

    Every cell holds ``cases_per_cell`` series with periods drawn uniformly
    from ``mu_range``. Multi-period cases keep pairwise period distance above
    ``log(min(mu_p, mu_q))``.
    """

    models: Sequence = (Model.RANDOM_WALK,)
    sigmas: Sequence[SigmaSpec] = GRID_SIGMAS
    ns: Sequence[int] = GRID_NS
    betas: Sequence[float] = GRID_BETAS
    period_counts: Sequence[int] = GRID_PERIOD_COUNTS
    cases_per_cell: int = 100
    mu_range: tuple = (10, 350)
    master_seed: int = 0

    def cells(self) -> Iterator[tuple]:
        """Yield ``(model, n_periods, sigma, beta, n)`` in a fixed order."""
        for cell in itertools.product(self.models, self.period_counts,
                                      self.sigmas, self.betas, self.ns):
            yield (Model.parse(cell[0]),) + cell[1:]

    def size(self) -> int:
        return (len(self.models) * len(self.period_counts) * len(self.sigmas)
                * len(self.betas) * len(self.ns) * self.cases_per_cell)


def _case_seed(master_seed: int, cell_key: tuple, case: int) -> int:
    words = [int(master_seed) & 0xFFFFFFFF]
    for part in cell_key:
        words.extend(np.frombuffer(str(part).encode(), dtype=np.uint8).tolist())
        words.append(0xFFFF)
    words.append(case)
    state = np.random.SeedSequence(words).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


def draw_periods(count: int, rng: np.random.Generator, mu_range=(10, 350),
                 max_tries: int = 10_000) -> tuple:
    lo, hi = mu_range
    for _ in range(max_tries):
        mus = sorted(int(m) for m in rng.integers(lo, hi + 1, size=count))
        if all(abs(p - q) > math.log(min(p, q))
               for p, q in itertools.combinations(mus, 2)):
            return tuple(mus)
    raise ConfigError(f"could not draw {count} separated periods in {mu_range}")


def suite_specs(grid: SuiteGrid) -> list[GenerativeSpec]:
    """All specs of ``grid`` without generating the series."""
    if grid.size() == 0:
        raise ConfigError("empty test-suite grid")
    lo, hi = grid.mu_range
    if lo < 2 or hi < lo:
        raise ConfigError(f"invalid mu_range {grid.mu_range}")
    specs = []
    for cell in grid.cells():
        model, n_periods, sigma, beta, n = cell
        check_sigma_spec(sigma)
        for case in range(grid.cases_per_cell):
            seed = _case_seed(grid.master_seed, (model.value, n_periods, sigma, beta, n), case)
            rng = np.random.default_rng(seed)
            mus = draw_periods(n_periods, rng, grid.mu_range)
            specs.append(GenerativeSpec(
                model=model,
                periods=mus,
                sigmas=tuple(resolve_sigma(sigma, mu) for mu in mus),
                n=n,
                beta=beta,
                seed=int(rng.integers(0, 2**63 - 1)),
                sigma_label=str(sigma),
            ))
    return specs


def build_test_suite(grid: SuiteGrid) -> list[tuple[GenerativeSpec, EventSeries]]:
    """Materialise every case of ``grid`` as ``(spec, series)`` pairs."""
    return [(spec, generate(spec)) for spec in suite_specs(grid)]


def with_seed(spec: GenerativeSpec, seed: int) -> GenerativeSpec:
    return replace(spec, seed=seed)
