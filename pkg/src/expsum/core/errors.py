"""Exception hierarchy shared by every layer.

Services raise these; the command line maps the groups to exit codes.
"""

from typing import Any


class ExpsumError(Exception):
    """Base class for all library errors."""


class DomainInputError(ExpsumError):
    """An argument lies outside the domain of the operation."""


class CapacityError(ExpsumError):
    """A request exceeds a configured size cap."""


class PrecisionError(ExpsumError):
    """A p-adic computation could not be certified to the requested precision."""


class VerificationError(ExpsumError):
    """A checked mathematical statement failed."""

    def __init__(self, message: str, *, index: int | None = None, detail: Any = None) -> None:
        super().__init__(message)
        self.index = index
        self.detail = detail


class StoreError(ExpsumError):
    """Census store failure."""


class CompositeP(DomainInputError):
    pass


class DegreeZero(DomainInputError):
    pass


class FieldMismatch(DomainInputError):
    pass


class NotAUnit(DomainInputError):
    pass


class BadIndex(DomainInputError):
    pass


class OddK(DomainInputError):
    pass


class KTooLarge(DomainInputError):
    pass


class HypothesisFailed(DomainInputError):
    pass


class EmptyInput(DomainInputError):
    pass


class TooLarge(CapacityError):
    pass


class PrecisionExhausted(PrecisionError):
    pass


class TruncationUncertified(PrecisionError):
    pass


class NonConvergent(PrecisionError):
    pass


class GrowthViolation(PrecisionError):
    pass


class DegreeMismatch(VerificationError):
    pass


class FEViolation(VerificationError):
    pass


class IdentityFailure(VerificationError):
    pass


class ConstancyViolation(VerificationError):
    pass


class IntertwineViolation(VerificationError):
    pass


class ConflictError(StoreError):
    pass


class NotFound(StoreError):
    pass
