"""Exception hierarchy.

Everything raised on bad input or an unsatisfiable request derives from
:class:`DomainError`; the CLI maps it to exit code 2.
"""


class DomainError(ValueError):
    pass


class InvalidParameter(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class NonFiniteInput(DomainError):
    pass


class UnsupportedCase(DomainError):
    pass


class PreconditionViolation(DomainError):
    pass


class InterpolationFailure(DomainError):
    pass


class NotInImage(DomainError):
    """The given power sums are not attained by any real multiset."""


class IllConditioned(DomainError):
    """Recovered roots are too clustered to meet the accuracy bound."""


class EmptyTable(DomainError):
    pass


class SymmetryViolation(DomainError):
    """Raised when a dataset assigns different values to one orbit.

    The offending :class:`~multisym.decompose.SymmetryReport` is attached
    as ``report``.
    """

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class InputFormatError(DomainError):
    """Malformed CSV/JSON input; the message names the row or field."""
