"""Exception types shared across the package."""


class NcballError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(NcballError, ValueError):
    """Matrix or tuple shapes are incompatible."""


class DomainError(NcballError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(NcballError, ValueError):
    """A documented precondition does not hold for the given input."""


class NotPositiveError(NcballError, ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""

    def __init__(self, message, eigenvalue):
        super().__init__(message)
        self.eigenvalue = float(eigenvalue)


class NotInBallError(NotPositiveError):
    """A tuple is not in the open ball required by a metric computation."""


class SingularityError(NcballError, ValueError):
    """A matrix is numerically singular."""

    def __init__(self, message, smallest_singular_value):
        super().__init__(message)
        self.smallest_singular_value = float(smallest_singular_value)


class ParseError(NcballError, ValueError):
    """An input file does not match its schema.

    ``pointer`` is a JSON pointer to the offending location.
    """

    def __init__(self, message, pointer=""):
        super().__init__(f"{message} (at {pointer or '/'})")
        self.pointer = pointer
