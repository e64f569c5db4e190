"""Exception hierarchy.

Everything a caller can fix by changing its input derives from
``ValidationError`` (CLI exit status 2).  ``ScaleTooLarge`` is separate
(exit status 3): the input is well formed but an exhaustive computation
would be too big to run.
"""


class ZeckError(Exception):
    """Base class for all package errors."""


class ValidationError(ZeckError, ValueError):
    pass


class EmptyCoeffs(ValidationError):
    pass


class LeadingZero(ValidationError):
    pass


class TrailingZero(ValidationError):
    pass


class NegativeCoeff(ValidationError):
    pass


class DegenerateSpec(ValidationError):
    """The recurrence does not produce a strictly increasing sequence."""


class SpecMismatch(ValidationError):
    pass


class IndexOutOfTable(ValidationError, IndexError):
    pass


class EmptyTable(ValidationError):
    pass


class WindowTooSmall(ValidationError):
    pass


class DegenerateDistribution(ValidationError):
    pass


class DegenerateMarginal(ValidationError):
    pass


class NonDecreasingIndices(ValidationError):
    pass


class TableTooShort(ValidationError):
    pass


class NoSignChange(ZeckError, ArithmeticError):
    """Bracketing failed; indicates an internal bug for a validated spec."""


class ScaleTooLarge(ZeckError):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(f"interval size {size} exceeds exhaustive limit {limit}")
