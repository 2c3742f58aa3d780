"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(SimulationError, ValueError):
    """A physical input failed validation (non-positive, non-finite, ...)."""


class DomainError(SimulationError, ValueError):
    """A special-function evaluation left its supported domain or lost accuracy."""


class CutoffError(SimulationError):
    """A truncation cutoff was too small for the requested accuracy."""


class ResolutionError(SimulationError):
    """A sampling grid is too coarse for the requested quantity."""


class RegimeError(SimulationError):
    """Parameters violate the validity regime of an approximate formula."""


class ConfigError(SimulationError):
    """A run configuration failed to parse or validate."""
