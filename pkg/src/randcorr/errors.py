"""Exception types shared across the package."""


class RandCorrError(Exception):
    """Base class for all errors raised by this package."""


class NotPositiveDefiniteError(RandCorrError):
    """A matrix expected to be positive definite is not.

    ``index`` is the 0-based pivot at which the Cholesky factorization
    failed.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"matrix is not positive definite (pivot {index} <= 0)")


class SingularFactorError(RandCorrError):
    """A triangular factor has a zero diagonal entry and cannot be inverted."""


class NonPositiveDiagonalError(RandCorrError):
    """A covariance matrix has a diagonal entry <= 0."""


class IndexOutOfRangeError(RandCorrError, IndexError):
    """A submatrix index selection is out of range or repeated."""


class DomainError(RandCorrError, ValueError):
    """A scalar argument is outside the mathematical domain of a function."""


class TooFewSamplesError(RandCorrError, ValueError):
    """A statistical routine was given fewer samples than it supports."""
