"""Exception types shared across the package."""


class LevyWaveError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LevyWaveError, ValueError):
    """A numeric argument is outside the domain a routine supports."""


class ModelRejectedError(LevyWaveError, ValueError):
    """A jump-size model violates a structural requirement (e.g. not centered)."""


class ConfigError(LevyWaveError, ValueError):
    """A run configuration is malformed or inconsistent."""


class CoverageError(LevyWaveError, ValueError):
    """A simulation window is too small for the requested observable."""
