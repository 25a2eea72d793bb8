"""Working-precision policy for the big-float special functions.

All mpmath evaluations in this package go through a PrecisionPolicy so that
runs are deterministic: the effective precision is a pure function of the
policy and the arguments, never of global mpmath state.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass

import mpmath as mp


@dataclass(frozen=True)
class PrecisionPolicy:
    """Bit budget for big-float work.

    working_bits is the baseline; operations with a documented cancellation
    estimate (imaginary-order Bessel series, K-integral at large t) raise the
    effective precision to estimate + series_guard_bits, and raise
    InsufficientPrecisionError if that would exceed working_bits when the
    policy is declared hard (max_bits set).
    """

    working_bits: int = 192
    series_guard_bits: int = 32
    max_bits: int | None = None

    def __post_init__(self):
        if self.working_bits < 64:
            raise ValueError("working_bits must be >= 64")
        if self.series_guard_bits < 0:
            raise ValueError("series_guard_bits must be >= 0")

    def effective_bits(self, cancellation_bits: float = 0.0) -> int:
        """Precision to use for a computation losing `cancellation_bits` bits.

        Rounded up to a multiple of 64 so node/constant caches keyed by
        precision are shared across nearby arguments.
        """
        need = max(self.working_bits,
                   int(math.ceil(cancellation_bits)) + self.series_guard_bits + 53)
        need = ((need + 63) // 64) * 64
        if self.max_bits is not None and need > self.max_bits:
            from .errors import InsufficientPrecisionError
            raise InsufficientPrecisionError(
                f"needs {need} bits but policy caps at {self.max_bits}")
        return need


DEFAULT_POLICY = PrecisionPolicy()


@contextmanager
def workbits(bits: int):
    """mpmath precision context (binary digits)."""
    with mp.workprec(bits):
        yield


def bessel_j_imag_cancellation_bits(x: float) -> float:
    """Cancellation estimate for the J_{2it} power series: ~1.5*x bits."""
    return 1.5 * abs(x)


def bessel_k_imag_cancellation_bits(t: float, x: float) -> float:
    """K_{2it}(x) ~ e^{-pi|t|} while the integrand scale is e^{-x}."""
    return max(0.0, (math.pi * abs(t) - x)) * 1.4427
