"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """Raised when inputs violate a documented precondition."""


class NumericDomainError(ArithmeticError):
    """Raised when a computation leaves its numeric domain (non-PSD input,
    singular system, non-finite objective)."""
