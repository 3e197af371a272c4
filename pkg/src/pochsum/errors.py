"""Exception hierarchy for pochsum.

Every failure mode that a caller might want to catch separately gets its own
class; all inherit from PochsumError so `except PochsumError` catches anything
raised deliberately by the package.
"""


class PochsumError(Exception):
    """Base class for all pochsum errors."""


class SpecValidationError(PochsumError):
    """A sum specification is malformed or divergent."""


class ParseError(PochsumError):
    """CLI sum expression could not be parsed.

    Carries the character position of the failure for error messages.
    """

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NotInSubclass(PochsumError):
    """Sum is outside the class handled by the CPL pipeline."""


class NonCyclotomicDenominator(PochsumError):
    """A rational function's denominator has a factor that is neither a power
    of t nor a cyclotomic polynomial; partial fractioning into CPL letters is
    impossible."""


class SeriesSingularity(PochsumError):
    """A generalized log-power series could not be manipulated as required
    (e.g. a non-cancelling pole or log at an evaluation point)."""


class ReductionError(PochsumError):
    """A CPL value at 1 could not be reduced over the constant table."""


class TableError(PochsumError):
    """A reduction table file is malformed or fails verification."""


class CertificationError(PochsumError):
    """Numeric verification of an identity failed its tolerance."""


class AccelerationError(PochsumError):
    """A series acceleration did not reach the requested accuracy."""
