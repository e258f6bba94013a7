"""Exception hierarchy shared across the package."""


class WidemimoError(Exception):
    """Base class for every error raised by this library."""


class DimensionError(WidemimoError, ValueError):
    """Antenna counts, coherence length or matrix shapes do not line up."""


class DomainError(WidemimoError, ValueError):
    """A scalar argument lies outside the mathematical domain of an operation."""


class RegimeError(WidemimoError, ValueError):
    """Channel parameters cannot be expressed in the wideband parameterization."""


class TrainingInfeasibleError(WidemimoError, ValueError):
    """Pilot-based operations need strictly more symbols per block than transmit antennas."""


class ConsistencyError(WidemimoError, RuntimeError):
    """A computed value violated a bound it is mathematically required to satisfy."""


class QuadratureError(WidemimoError, RuntimeError):
    """Adaptive quadrature did not converge; ``estimate`` carries the value reached."""

    def __init__(self, message: str, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate


class ConfigError(WidemimoError, ValueError):
    """A sweep configuration file failed to parse or validate."""
