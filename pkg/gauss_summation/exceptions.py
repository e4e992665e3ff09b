"""Exception hierarchy for the Gaussian summation library."""

from typing import Optional


class GaussSummationError(Exception):
    """Base class for every error raised by gauss_summation."""


class DomainError(GaussSummationError, ValueError):
    """Argument lies outside the mathematical domain of an operation."""


class ArgumentError(GaussSummationError, ValueError):
    """Malformed or insufficient arguments, or a violated precondition."""


class NumericalFailure(GaussSummationError, ArithmeticError):
    """An iterative method failed to converge."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class PoleError(GaussSummationError, ArithmeticError):
    """Evaluation at, or too close to, a pole."""

    def __init__(self, message: str, value: Optional[float] = None):
        super().__init__(message)
        self.value = value


class RangeError(GaussSummationError, OverflowError):
    """Result is not representable in double precision."""


class EvaluationError(GaussSummationError, ArithmeticError):
    """A summand produced a non-finite value or raised while being evaluated."""

    def __init__(self, message: str, k: float):
        super().__init__(message)
        self.k = k


class RuleNotFoundError(GaussSummationError, FileNotFoundError):
    """Requested rule is not present in the cache directory."""

    def __init__(self, message: str, n: int):
        super().__init__(message)
        self.n = n


class CorruptCacheError(GaussSummationError):
    """A cache file could not be parsed or fails the rule invariants."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class ExprSyntaxError(GaussSummationError, ValueError):
    """Summand expression could not be parsed."""

    def __init__(self, message: str, offset: int, expected: str):
        super().__init__(f"{message} at offset {offset}, expected {expected}")
        self.offset = offset
        self.expected = expected
