"""Benchmark sweeps, accuracy scoring and reference-loss calibration."""

from __future__ import annotations

import csv
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .baselines import BASELINES, run_baseline
from .config import GMPDAConfig
from .detect import detect
from .errors import ConfigError, DegenerateSeriesError, GMPDAError
from .events import EventSeries
from .generator import GenerativeSpec, SuiteGrid, generate

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

CSV_COLUMNS = ("model", "|mu|", "sigma_spec", "beta", "n", "detector",
               "mean_acc", "ci_half", "mean_time_s")
DETECTORS = ("gmpda", "gmpda-nofit", *BASELINES)
TIMING_REPEATS = 10
CALIBRATION_COUNTS = (10, 30, 50, 100, 200, 400)
CALIBRATION_LENGTHS = (500, 1000, 2000, 4000, 8000, 16000)


def hit_flags(estimates: Sequence[float], truths: Sequence[float],
              sigmas: Sequence[float]) -> tuple:
    """Per-truth hit flags.

    A truth ``mu`` is hit by an estimate within ``mu +- 0.5 * sigma``.
    Candidate pairs are matched greedily by distance (ties by value), each
    estimate and each truth used at most once.
    """
    if len(truths) != len(sigmas):
        raise ValueError("truths and sigmas must have equal length")
    pairs = sorted(
        (abs(float(e) - float(mu)), float(mu), float(e), i, j)
        for i, (mu, sigma) in enumerate(zip(truths, sigmas))
        for j, e in enumerate(estimates)
        if abs(float(e) - float(mu)) <= 0.5 * float(sigma)
    )
    flags = [False] * len(truths)
    used = set()
    for *_, i, j in pairs:
        if not flags[i] and j not in used:
            flags[i] = True
            used.add(j)
    return tuple(flags)


def score(estimates: Sequence[float], truths: Sequence[float], sigmas: Sequence[float]) -> float:
    """Share of true periods recovered, see :func:`hit_flags`.

    >>> score([16], [15], [2])
    1.0
    >>> score([16.5], [15], [2])
    0.0
    """
    if len(truths) == 0:
        raise ValueError("need at least one true period")
    return sum(hit_flags(estimates, truths, sigmas)) / len(truths)


@dataclass
class BenchRecord:
    spec: GenerativeSpec
    seed: int
    detector: str
    estimates: tuple
    hits: tuple
    accuracy: float
    wall_time: float
    error: Optional[str] = None


def _gmpda_runner(curve_fit: bool, config: Optional[GMPDAConfig]):
    def run(series: EventSeries, spec: GenerativeSpec) -> tuple:
        k = len(spec.periods)
        base = config or GMPDAConfig.benchmark(k)
        cfg = base.replace(model=spec.model, curve_fit=curve_fit,
                           max_periods=max(base.max_periods, k))
        return detect(series, cfg).periods
    return run


def _baseline_runner(name: str):
    def run(series: EventSeries, spec: GenerativeSpec) -> tuple:
        return run_baseline(name, series, len(spec.periods)).periods
    return run


def detector_runner(name: str, config: Optional[GMPDAConfig] = None) -> Callable:
    """Callable ``(series, spec) -> periods`` for a detector name.

    ``gmpda`` fits sigmas, ``gmpda-nofit`` keeps the initial sigmas. Without
    ``config`` GMPDA uses benchmark settings for the case's period count.
    Baselines are told the true number of periods.
    """
    if name == "gmpda":
        return _gmpda_runner(True, config)
    if name == "gmpda-nofit":
        return _gmpda_runner(False, config)
    if name in BASELINES:
        return _baseline_runner(name)
    raise ConfigError(f"unknown detector {name!r}; choose from {', '.join(DETECTORS)}")


def _run_case(args) -> list[BenchRecord]:
    spec, detectors, config, repeats = args
    series = generate(spec)
    out = []
    for name in detectors:
        runner = detector_runner(name, config)
        estimates, error = (), None
        t0 = time.perf_counter()
        try:
            for _ in range(repeats):
                estimates = tuple(float(p) for p in runner(series, spec))
        except (GMPDAError, ValueError, FloatingPointError) as exc:
            error = f"{type(exc).__name__}: {exc}"
            estimates = ()
        elapsed = (time.perf_counter() - t0) / repeats
        hits = hit_flags(estimates, spec.periods, spec.sigmas) if error is None \
            else (False,) * len(spec.periods)
        acc = sum(hits) / len(spec.periods)
        out.append(BenchRecord(spec, spec.seed, name, estimates, hits, acc, elapsed, error))
    return out


@dataclass
class SweepResult:
    records: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def write_csv(self, path) -> None:
        write_csv(self.rows, path)


def aggregate(records: Iterable[BenchRecord]) -> list[dict]:
    """Per-cell mean accuracy, 95% half-width ``1.96 * SEM`` and mean time."""
    cells: dict[tuple, list[BenchRecord]] = {}
    for r in records:
        key = (r.spec.model.value, len(r.spec.periods), r.spec.sigma_label or "",
               float(r.spec.beta), int(r.spec.n), r.detector)
        cells.setdefault(key, []).append(r)
    rows = []
    for key, recs in cells.items():
        acc = np.array([r.accuracy for r in recs])
        sem = acc.std(ddof=1) / math.sqrt(acc.size) if acc.size > 1 else 0.0
        rows.append(dict(zip(CSV_COLUMNS, (*key, float(acc.mean()), 1.96 * float(sem),
                                           float(np.mean([r.wall_time for r in recs]))))))
    return rows


def run_sweep(suite: Sequence[GenerativeSpec], detectors: Sequence[str] = ("gmpda",),
              config: Optional[GMPDAConfig] = None, repeats: int = 1,
              workers: int = 1) -> SweepResult:
    """Run every detector on every case of ``suite``.

    Parameters
    ----------
    suite : sequence of GenerativeSpec
        Cases; each carries its own seed, so results do not depend on order
        or on the number of workers.
    detectors : sequence of str
        Names from :data:`DETECTORS`.
    config : GMPDAConfig, optional
        GMPDA settings; benchmark settings for the case's period count by
        default.
    repeats : int
        Detections per case for timing; the reported time is the mean.
    workers : int
        Worker processes. Records come back in suite order either way.

    A detector that raises on a case scores 0 for it and the error text is
    kept in the record.
    """
    for name in detectors:
        detector_runner(name)
    if repeats < 1:
        raise ConfigError("repeats must be >= 1")
    jobs = [(spec, tuple(detectors), config, repeats) for spec in suite]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_case, jobs))
    else:
        chunks = [_run_case(job) for job in jobs]
    records = [r for chunk in chunks for r in chunk]
    return SweepResult(records, aggregate(records))


def write_csv(rows: Sequence[dict], path) -> None:
    """Write aggregate rows to a path or an open text stream."""
    if hasattr(path, "write"):
        _write_rows(rows, path)
        return
    with open(path, "w", newline="") as fh:
        _write_rows(rows, fh)


def _write_rows(rows: Sequence[dict], fh) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (f"{v:.6f}" if isinstance(v, float) and k != "beta" else v)
                    for k, v in row.items()})


_GRID_KEYS = {"models", "sigmas", "ns", "betas", "period_counts", "cases_per_cell",
              "mu_range", "master_seed"}


def load_grid(path) -> SuiteGrid:
    """Read a :class:`SuiteGrid` from a TOML file.

    Keys match the grid fields; a ``[grid]`` table is optional.

    Example
    -------
    ::

        models = ["rw"]
        sigmas = ["log", "mu/8"]
        ns = [100]
        betas = [0, 0.5]
        period_counts = [1]
        cases_per_cell = 25
    """
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    data = data.get("grid", data)
    unknown = set(data) - _GRID_KEYS
    if unknown:
        raise ConfigError(f"unknown grid keys: {sorted(unknown)}")
    kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
    return SuiteGrid(**kwargs)


# --- reference loss --------------------------------------------------------

@dataclass
class ReferenceLoss:
    """Losses of pure-noise series and their quantiles."""

    samples: dict
    per_cell: dict
    value: float
    quantile: float

    def to_dict(self) -> dict:
        return {
            "quantile": self.quantile,
            "value": self.value,
            "cells": [
                {"n": n, "length": length, "quantile_value": self.per_cell[(n, length)],
                 "losses": list(self.samples[(n, length)])}
                for (n, length) in sorted(self.samples)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def noise_series(n: int, length: int, rng: np.random.Generator) -> EventSeries:
    """``n`` distinct ticks drawn uniformly from ``1..length``."""
    if not 1 <= n <= length:
        raise ConfigError(f"cannot place {n} events in {length} ticks")
    stamps = rng.choice(length, size=n, replace=False) + 1
    return EventSeries.from_timestamps(stamps, length)


def calibrate_reference_loss(counts: Sequence[int] = CALIBRATION_COUNTS,
                             lengths: Sequence[int] = CALIBRATION_LENGTHS,
                             reps: int = 100, quantile: float = 0.01, seed: int = 0,
                             config: Optional[GMPDAConfig] = None) -> ReferenceLoss:
    """Detection losses on uniform noise, per ``(count, length)`` cell.

    Each cell gets ``reps`` series, each run through :func:`detect`. Cells
    with more events than ticks are skipped, as are series whose intervals
    all exceed the loss window. The returned value is the ``quantile`` of the
    pooled losses; a periodic series scoring below it is unlikely to be noise.
    """
    if not 0 < quantile < 1:
        raise ConfigError("quantile must lie in (0, 1)")
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    config = config or GMPDAConfig()
    samples: dict[tuple, list[float]] = {}
    for n in counts:
        for length in lengths:
            if n > length:
                continue
            rng = np.random.default_rng([int(seed), int(n), int(length)])
            losses = []
            for _ in range(reps):
                series = noise_series(int(n), int(length), rng)
                try:
                    losses.append(float(detect(series, config).loss))
                except DegenerateSeriesError:
                    continue
            if losses:
                samples[(int(n), int(length))] = losses
    if not samples:
        raise ConfigError("calibration produced no losses")
    pooled = np.concatenate([np.asarray(v) for v in samples.values()])
    per_cell = {k: float(np.quantile(v, quantile)) for k, v in samples.items()}
    return ReferenceLoss(samples, per_cell, float(np.quantile(pooled, quantile)), quantile)
