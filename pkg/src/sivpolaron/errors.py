class DomainError(ValueError):
    """Input outside the physical or mathematical domain of an operation."""


class NumericalError(RuntimeError):
    """An eigen-solver or optimizer failed to produce a trustworthy result."""


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""
