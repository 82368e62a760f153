"""Exception types shared across the package."""


class InvalidDimensionError(ValueError):
    """Mode count or matrix shape outside what an operation accepts."""


class InvariantViolation(ArithmeticError):
    """A produced object failed a physical invariant (Hermiticity, trace, PSD)."""


class PostselectionError(ArithmeticError):
    """Post-selection event has zero probability."""
