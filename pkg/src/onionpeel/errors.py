"""Exception types raised across the package."""


class OnionPeelError(Exception):
    """Base class for all package errors."""


class InvalidInputError(OnionPeelError, ValueError):
    """Non-finite coordinates, bad shapes, out-of-range indices."""


class DegenerateInputError(OnionPeelError, ValueError):
    """Too few points, or all points collinear, to form a hull."""


class InvalidParameterError(OnionPeelError, ValueError):
    """A parameter (variance, covariance, spec field, k, ...) is out of its domain."""


class InsufficientDataError(OnionPeelError, ValueError):
    """Not enough samples to estimate a statistic."""


class PreconditionError(OnionPeelError, ValueError):
    """A documented precondition of an algorithm was violated."""


class ParseError(OnionPeelError, ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDatasetError(ParseError):
    """The input file holds no points."""
