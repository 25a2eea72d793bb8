"""Shared exception types for the verification suites."""


class MixMomentError(Exception):
    """Base class for all package errors."""


class PoleInputError(MixMomentError):
    """Input coincides with a pole of the requested function."""


class NonConvergenceError(MixMomentError):
    """A series or quadrature failed to certify the requested tolerance."""


class InsufficientPrecisionError(MixMomentError):
    """The precision policy cannot cover the cancellation estimate."""


class BudgetError(MixMomentError):
    """A configured cost budget (modulus, truncation, runtime proxy) was exceeded."""


class TruncationBudgetError(BudgetError):
    """A truncated sum's certified tail exceeds the allowed tolerance."""


class KernelRangeError(MixMomentError):
    """Kernel evaluated outside its certified validity window."""


class UnsupportedWeightError(MixMomentError):
    """Weight outside the one-dimensional cusp-space table."""


class NonCoprimeError(MixMomentError):
    """Modular inverse requested for non-coprime arguments."""


class StationaryPointError(MixMomentError):
    """Stationary-phase oracle preconditions violated (zero or multiple critical points)."""


class UsageError(MixMomentError):
    """Invalid CLI usage."""
