"""Exception types raised across the package."""


class GpcsError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(GpcsError, ValueError):
    pass


class NotPositiveDefinite(GpcsError, ValueError):
    pass


class NegativeGamma(GpcsError, ValueError):
    pass


class EmptyGrid(GpcsError, ValueError):
    pass


class GridMismatch(GpcsError, ValueError):
    pass


class EmptyConfidenceSet(GpcsError, ValueError):
    """The ratio density never reaches the coverage threshold."""


class NonFiniteAcquisition(GpcsError, ValueError):
    pass


class OutOfDomain(GpcsError, ValueError):
    pass


class ConfigError(GpcsError, ValueError):
    pass


class BandError(GpcsError):
    """Wraps a per-point failure with the offending test point attached."""

    def __init__(self, x, cause):
        self.x = x
        self.cause = cause
        super().__init__(f"band failed at x={x!r}: {cause}")


class StepError(GpcsError):
    """Wraps an acquisition failure with the BO step index attached."""

    def __init__(self, step, cause):
        self.step = step
        self.cause = cause
        super().__init__(f"BO step {step} failed: {cause}")
