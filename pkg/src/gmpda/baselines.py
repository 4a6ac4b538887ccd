"""Comparison detectors that return a fixed number of periods.

Three spectral methods (periodogram of the binary series, periodogram of its
autocorrelation, periodogram of the interval histogram) and a modulus-based
pair count. Each one is told how many periods to report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sp_fft
from scipy.signal import correlate, find_peaks, periodogram

from .errors import DegenerateSeriesError, ParameterError
from .events import EventSeries
from .intervals import interval_histogram

MIN_PERIOD = 10
MAX_PERIOD = 350
# short inputs are zero-padded to at least this many samples so that peak
# positions in the period band are resolved finer than one tick
MIN_NFFT = 1 << 14
# single full-length segment with lightly tapered edges
WINDOW = ("tukey", 0.25)


@dataclass(frozen=True)
class BaselineResult:
    method: str
    periods: tuple
    scores: tuple


def _check_k(k: int) -> int:
    if int(k) != k or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    return int(k)


def _check_band(min_period: float, max_period: float) -> None:
    if not 1 < min_period < max_period:
        raise ParameterError("need 1 < min_period < max_period")


# peaks closer than this many raw frequency bins to a chosen frequency or one
# of its harmonics belong to the same peak (main lobe and first sidelobes)
LOBE_BINS = 3.0
# a subharmonic this strong relative to the peak is taken as the fundamental
SUBHARMONIC_RATIO = 0.5


def _local_max(power: np.ndarray, centre: float, half: float) -> int:
    lo = max(int(np.floor(centre - half)), 1)
    hi = min(int(np.ceil(centre + half)), power.size - 1)
    if hi < lo:
        return -1
    return lo + int(np.argmax(power[lo:hi + 1]))


def _fundamental(i: int, power: np.ndarray, periods: np.ndarray, half: float,
                 max_period: float) -> int:
    """Bin of the lowest in-band subharmonic of bin ``i`` with comparable power.

    Spike trains put equal power on every harmonic, so the strongest peak is
    often a harmonic of the period rather than the period itself.
    """
    for j in range(int(max_period // periods[i]), 1, -1):
        b = _local_max(power, i / j, half)
        if b > 0 and periods[b] <= max_period and power[b] >= SUBHARMONIC_RATIO * power[i]:
            return b
    return i


def _pick(freqs: np.ndarray, power: np.ndarray, k: int, n_samples: int, min_period: float,
          max_period: float) -> tuple[tuple, tuple]:
    """Top-k in-band spectral peaks, one per fundamental.

    Peaks are visited by decreasing power and mapped to their fundamental.
    A peak is skipped when it sits within ``LOBE_BINS`` raw bins of a chosen
    frequency or any of its harmonics. When fewer than k peaks survive the
    strongest remaining in-band bins fill the list.
    """
    with np.errstate(divide="ignore"):
        periods = np.where(freqs > 0, 1.0 / freqs, np.inf)
    band = (periods >= min_period) & (periods <= max_period)
    if not band.any():
        raise DegenerateSeriesError("period band holds no frequency bins")
    peaks, _ = find_peaks(power)
    peaks = peaks[band[peaks]]
    peaks = peaks[np.lexsort((periods[peaks], -power[peaks]))]
    df = freqs[1] - freqs[0]
    tol = LOBE_BINS / n_samples
    chosen: list[int] = []
    for i in peaks:
        i = _fundamental(int(i), power, periods, tol / df, max_period)
        f = freqs[i]
        if any(abs(f - max(round(f / freqs[c]), 1) * freqs[c]) < tol for c in chosen):
            continue
        chosen.append(i)
        if len(chosen) == k:
            break
    if len(chosen) < k:
        taken = set(chosen)
        rest = np.flatnonzero(band)
        rest = rest[np.lexsort((periods[rest], -power[rest]))]
        chosen.extend(int(i) for i in rest[: k + len(taken)] if i not in taken)
        chosen = chosen[:k]
    return (tuple(float(periods[i]) for i in chosen),
            tuple(float(power[i]) for i in chosen))


def _spectral_periods(signal: np.ndarray, k: int, min_period: float, max_period: float,
                      method: str) -> BaselineResult:
    x = np.asarray(signal, dtype=float)
    if x.size < 2 or np.ptp(x) == 0:
        raise DegenerateSeriesError(f"{method}: input signal is constant")
    nfft = sp_fft.next_fast_len(max(x.size, MIN_NFFT))
    freqs, power = periodogram(x, nfft=nfft, detrend="constant", window=WINDOW)
    p, s = _pick(freqs, power, k, x.size, min_period, max_period)
    return BaselineResult(method, p, s)


def _require_events(series: EventSeries) -> None:
    if len(series) == 0:
        raise DegenerateSeriesError("series has no events")


def fft_detect(series: EventSeries, k: int, min_period: float = MIN_PERIOD,
               max_period: float = MAX_PERIOD) -> BaselineResult:
    """Periods of the ``k`` strongest periodogram peaks of the binary series.

    The periodogram uses one full-length tapered window and removes the
    mean first, so the zero frequency never wins.
    """
    k = _check_k(k)
    _check_band(min_period, max_period)
    _require_events(series)
    return _spectral_periods(series.to_binary(), k, min_period, max_period, "fft")


def autocorrelation(series: EventSeries) -> np.ndarray:
    """Biased autocorrelation of the mean-removed binary series, lags ``0..N_T-1``."""
    x = series.to_binary().astype(float)
    x -= x.mean()
    full = correlate(x, x, mode="full", method="fft")
    return full[x.size - 1:] / x.size


def acf_fft_detect(series: EventSeries, k: int, min_period: float = MIN_PERIOD,
                   max_period: float = MAX_PERIOD) -> BaselineResult:
    """Periodogram peaks of the autocorrelation function."""
    k = _check_k(k)
    _check_band(min_period, max_period)
    _require_events(series)
    return _spectral_periods(autocorrelation(series), k, min_period, max_period, "acf")


def hist_fft_detect(series: EventSeries, k: int, min_period: float = MIN_PERIOD,
                    max_period: float = MAX_PERIOD, loss_length: int = 400) -> BaselineResult:
    """Periodogram peaks of the interval histogram over lags ``1..loss_length``."""
    k = _check_k(k)
    _check_band(min_period, max_period)
    _require_events(series)
    hist = interval_histogram(series, min(int(loss_length), series.length))
    if hist.degenerate:
        raise DegenerateSeriesError("hist: no intervals inside the histogram window")
    return _spectral_periods(hist.counts, k, min_period, max_period, "hist")


def eperiodicity_detect(series: EventSeries, k: int, min_period: int = MIN_PERIOD,
                        max_period: int = MAX_PERIOD) -> BaselineResult:
    """Candidate periods ranked by how many event pairs they cover.

    An integer candidate ``q`` covers a pair whose interval lies within one
    tick of some multiple ``m * q`` with ``m >= 1``. Ties go to the smaller
    ``q``.
    """
    k = _check_k(k)
    lo, hi = int(np.ceil(min_period)), int(np.floor(max_period))
    _check_band(lo, hi)
    _require_events(series)
    hist = interval_histogram(series, series.length)
    prefix = np.concatenate([[0], np.cumsum(hist.counts)])
    top = prefix.size - 1
    qs = np.arange(lo, hi + 1)
    scores = np.zeros(qs.size)
    for j, q in enumerate(qs):
        centres = np.arange(q, top + 2, q)
        # lags centre-1 .. centre+1, i.e. prefix[centre+1] - prefix[centre-2]
        scores[j] = (prefix[np.minimum(centres + 1, top)]
                     - prefix[np.clip(centres - 2, 0, top)]).sum()
    order = np.lexsort((qs, -scores))[:k]
    return BaselineResult("eperiodicity", tuple(float(qs[i]) for i in order),
                          tuple(float(scores[i]) for i in order))


BASELINES = {
    "fft": fft_detect,
    "acf": acf_fft_detect,
    "hist": hist_fft_detect,
    "eperiodicity": eperiodicity_detect,
}


def run_baseline(method: str, series: EventSeries, k: int, **kwargs) -> BaselineResult:
    """Dispatch to a baseline by name (``fft``, ``acf``, ``hist``, ``eperiodicity``)."""
    try:
        fn = BASELINES[method]
    except KeyError:
        raise ParameterError(f"unknown baseline {method!r}; choose from {sorted(BASELINES)}") from None
    return fn(series, k, **kwargs)
