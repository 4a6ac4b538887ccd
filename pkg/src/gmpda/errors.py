"""Exception types raised across the package."""


class GMPDAError(ValueError):
    """Base class for all errors raised by gmpda."""


class InvalidSeriesError(GMPDAError):
    """Input cannot be turned into an event series."""


class SeriesRangeError(GMPDAError):
    """A timestamp lies outside ``[1, length]``."""


class ParameterError(GMPDAError):
    """Invalid generative or model parameter."""


class ConfigError(GMPDAError):
    """Invalid algorithm or grid configuration."""


class TooFewEventsError(GMPDAError):
    """Series has too few events for detection."""


class DegenerateSeriesError(GMPDAError):
    """Histogram carries no interval mass in the evaluation window."""
