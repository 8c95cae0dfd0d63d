"""Exception types shared across the package."""


class EllipticTodaError(Exception):
    """Base class for all library errors."""


class DomainError(EllipticTodaError, ValueError):
    """Input violates a mathematical precondition (root ordering,
    admissible interval, modulus range, ...)."""


class ConfigurationError(EllipticTodaError, ValueError):
    """Invalid configuration, e.g. a working precision that is too low."""


class PoleError(EllipticTodaError, ArithmeticError):
    """Evaluation point is at (or numerically indistinguishable from) a
    pole or zero of the function being evaluated."""


class DegenerateDeterminantError(EllipticTodaError, ArithmeticError):
    """A Hankel determinant fell below the conditioning floor; carries the
    first failing index."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"degenerate Hankel determinant at n={index}")


class TruncationError(EllipticTodaError, ArithmeticError):
    """A truncated sum could not meet its tail bound."""


class EvaluationError(EllipticTodaError, ArithmeticError):
    """Numerical evaluation failed (e.g. zero denominator in a continued
    fraction); carries the depth/index where it happened."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"evaluation failed at index {index}")
