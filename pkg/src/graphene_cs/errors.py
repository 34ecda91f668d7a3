"""Exception hierarchy.

``ValidationError`` covers bad inputs (CLI exit code 1); ``NumericalError``
covers non-convergence and truncation failures (exit code 2).
"""


class GrapheneCSError(Exception):
    pass


class ValidationError(GrapheneCSError, ValueError):
    pass


class NumericalError(GrapheneCSError, ArithmeticError):
    pass


class TruncationError(NumericalError):
    """A series or basis truncation could not meet its tolerance."""


class GridTooNarrowError(NumericalError):
    """Probability mass outside the sampling grid exceeds the allowed tail."""


class LevelCoincidenceError(NumericalError):
    """The mean energy sits on a spectrum level, so no bounding pair exists."""
