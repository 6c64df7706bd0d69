"""Exception hierarchy shared by all modules."""


class QuadricError(Exception):
    """Base class for all package errors."""


class ParameterDomainError(QuadricError, ValueError):
    """A weight or family parameter lies outside its admissible range."""


class InsufficientDataError(QuadricError, ValueError):
    """A recurrence is too short for the requested rule or degree."""


class ConvergenceError(QuadricError, RuntimeError):
    """An iterative refinement failed to stabilise.

    Attributes
    ----------
    discrepancy : float
        Max-norm difference between the last two iterates.
    """

    def __init__(self, message, discrepancy):
        super().__init__(f"{message} (last discrepancy {discrepancy:.3e})")
        self.discrepancy = discrepancy


class GeometryError(QuadricError, ValueError):
    """A point lies off the surface, outside the body, or the profile is invalid."""


class BasisIndexError(QuadricError, IndexError):
    """A basis index is outside the admissible range."""


class NumericalError(QuadricError, ArithmeticError):
    """A structural numerical failure, e.g. a zero pivot."""


class FormatError(QuadricError, ValueError):
    """A coefficient or grid file does not match the expected format."""
