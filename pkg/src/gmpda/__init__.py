"""Gaussian mixture periodicity detection for binary event series."""

from .baselines import (BaselineResult, acf_fft_detect, eperiodicity_detect, fft_detect,
                        hist_fft_detect, run_baseline)
from .bench import (BenchRecord, ReferenceLoss, calibrate_reference_loss, run_sweep, score)
from .config import GMPDAConfig
from .curves import CurveParams, g_clock, g_random_walk
from .detect import DetectionResult, detect, empirical_loss
from .errors import (ConfigError, DegenerateSeriesError, GMPDAError, InvalidSeriesError,
                     ParameterError, SeriesRangeError, TooFewEventsError)
from .events import EventSeries, read_series, write_series
from .generator import GenerativeSpec, SuiteGrid, build_test_suite, generate, inject_noise
from .intervals import estimate_z_hat, interval_histogram
from .models import Model, resolve_sigma

__all__ = [
    "BaselineResult", "BenchRecord", "CurveParams", "ReferenceLoss", "acf_fft_detect",
    "calibrate_reference_loss", "eperiodicity_detect", "fft_detect", "g_clock",
    "g_random_walk", "hist_fft_detect", "run_baseline", "run_sweep", "score",
    "ConfigError", "DegenerateSeriesError", "DetectionResult", "EventSeries", "GMPDAConfig",
    "GMPDAError", "GenerativeSpec", "InvalidSeriesError", "Model", "ParameterError",
    "SeriesRangeError", "SuiteGrid", "TooFewEventsError", "build_test_suite", "detect",
    "empirical_loss", "estimate_z_hat", "generate", "inject_noise", "interval_histogram",
    "read_series", "resolve_sigma", "write_series",
]

__version__ = "0.1.0"
