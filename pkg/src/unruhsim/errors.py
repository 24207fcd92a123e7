"""Exception types shared across the package."""


class UnruhSimError(Exception):
    """Base class for all library errors."""


class ConfigurationError(UnruhSimError):
    """Inconsistent mode registries, duplicate modes, or bad run setup."""


class DomainError(UnruhSimError, ValueError):
    """Arguments outside the mathematical domain of an operation."""


class PrecisionError(UnruhSimError):
    """Requested accuracy is unreachable at the given truncation or cap.

    Carries a suggested per-mode truncation when one can be computed, and
    the smallest admissible omega/a when a squeezing cap was violated.
    """

    def __init__(self, message, required_truncation=None, min_omega_over_a=None):
        super().__init__(message)
        self.required_truncation = required_truncation
        self.min_omega_over_a = min_omega_over_a


class ZeroProbabilityError(UnruhSimError):
    """A projection or post-selection outcome has no usable probability."""


class ResourceError(UnruhSimError):
    """A dense computation would exceed the configured size cap."""
