"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


class NumericError(RuntimeError):
    """Numerical failure during generation or simulation (overflow, NaN)."""
