"""Exception hierarchy shared by the library and the CLI exit-code map."""


class ShortedOpError(Exception):
    """Base class for all library errors."""


class DimensionError(ShortedOpError):
    """Shapes or backends of the operands do not line up."""


class NotHermitianError(ShortedOpError):
    """Input fails the Hermitian check (beyond the symmetrization tolerance)."""


class NotPSDError(ShortedOpError):
    """Input Hermitian matrix is not non-negative."""


class BackendUnsupportedError(ShortedOpError):
    """Operation needs scalar square roots, which the exact backend lacks."""


class NotPositivePairError(ShortedOpError):
    """(A, B) fails the positive-pair criterion; carries the diagnostic."""

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic


class RangeMembershipError(ShortedOpError):
    """A functional lies outside the range it must belong to."""


class OrderViolationError(ShortedOpError):
    """A required Loewner comparison fails."""


class ChainError(ShortedOpError):
    """A supplied operator chain is not Loewner-decreasing."""


class DocumentError(ShortedOpError):
    """Malformed matrix document (bad JSON structure or scalar grammar)."""


class DocumentValidationError(ShortedOpError):
    """Well-formed document with inconsistent content (shape, partition...)."""


class InternalCheckError(ShortedOpError):
    """An identity the theory guarantees failed; indicates a bug."""
