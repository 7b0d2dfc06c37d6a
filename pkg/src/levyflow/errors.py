"""Exception types shared across the package."""


class LevyflowError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LevyflowError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NumericsError(LevyflowError, RuntimeError):
    """A numerical procedure failed to converge or lost too much accuracy."""


class AccuracyError(NumericsError):
    """A result was produced but its accuracy certificate failed (e.g. a
    density grid captured too little mass to be usable)."""


class ConfigError(LevyflowError, ValueError):
    """A model configuration failed validation; message carries the field path."""
