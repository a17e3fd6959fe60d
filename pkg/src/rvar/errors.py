"""Exception types shared across the package.

The hierarchy separates mathematical domain violations (bad parameters,
levels outside a model's reach) from band/conditioning degeneracies and
from malformed input data, because the CLI maps them to different exit
codes.
"""


class DomainError(ValueError):
    """Parameter or argument outside the mathematical domain of an operation."""


class InfeasibleLevelError(DomainError):
    """A requested level cannot be attained at the given conditioning point."""


class BandError(DomainError):
    """The fixed coordinate lies outside the valid band of a curve."""


class DegenerateRangeError(BandError):
    """The effective integration band has collapsed to (numerically) zero width."""


class EmptyConditioningError(DomainError):
    """No sample points satisfy the conditioning event."""


class ZeroDensityError(DomainError):
    """A conditional density needed by a sensitivity formula vanishes."""


class ComonotonicityError(ValueError):
    """A component class required to be comonotonic is not."""


class DataError(ValueError):
    """Malformed input data (CSV parsing and validation).

    line: 1-based line number of the offending record, 0 if not line-specific.
    """

    def __init__(self, message, line=0):
        super().__init__(message)
        self.line = line
