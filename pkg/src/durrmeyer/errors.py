"""Exception types raised across the package."""


class DurrmeyerError(Exception):
    """Base class for all errors raised by :mod:`durrmeyer`."""


class ShapeMismatch(DurrmeyerError, ValueError):
    pass


class ZeroDiagonal(DurrmeyerError, ZeroDivisionError):
    pass


class IndexOutOfRange(DurrmeyerError, IndexError):
    pass


class ConvergenceFailure(DurrmeyerError, ArithmeticError):
    """A series or quadrature did not reach its tolerance within the budget."""


class GrowthViolation(DurrmeyerError, ValueError):
    """The declared exponential growth rate of ``f`` is not below the operator index."""
