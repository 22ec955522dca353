"""Exception types raised by regionscreen."""


class DimensionError(ValueError):
    """Vectors or dictionaries with incompatible lengths."""


class ConfigurationError(ValueError):
    """Invalid construction parameters or experiment configuration."""


class DomainError(ValueError):
    """A parameter value lies outside a continuous dictionary's domain."""


class ConsistencyError(RuntimeError):
    """An internal invariant was violated (e.g. every atom screened out)."""
