"""Exact q-expansions of level-1 modular forms and Deligne-normalized
Hecke eigenvalues for one-dimensional cusp spaces.

All coefficient arithmetic is exact big-integer. Products use Kronecker
substitution: coefficients are packed into one Python integer (balanced
digits of width B bits, B chosen from the operands' coefficient bounds so no
digit overflows), multiplied once, and unpacked; this turns series squaring
at n_max ~ 2.5e4 into a single bigint multiply. Floats enter only in the
normalized eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import UnsupportedWeightError

DIM1_WEIGHTS = (12, 16, 18, 20, 22, 26)


# ---------------------------------------------------------------------------
# packed exact series multiplication
# ---------------------------------------------------------------------------

def _pack(coeffs, width_bytes: int) -> int:
    off = 1 << (8 * width_bytes - 1)
    buf = b"".join((c + off).to_bytes(width_bytes, "little") for c in coeffs)
    # subtract the offset comb sum_i off * 2^{8 w i}
    comb = int.from_bytes(off.to_bytes(width_bytes, "little") * len(coeffs), "little")
    return int.from_bytes(buf, "little") - comb


def _unpack(value: int, width_bytes: int, count: int):
    off = 1 << (8 * width_bytes - 1)
    # offset every digit of the product (it may extend past `count` and be
    # negative in the high digits), then read back the low `count` digits
    ndig = max(count, (abs(value).bit_length()) // (8 * width_bytes) + 2)
    comb = int.from_bytes(off.to_bytes(width_bytes, "little") * ndig, "little")
    shifted = value + comb
    if shifted < 0:
        raise ValueError("digit width too small for product")
    raw = shifted.to_bytes(ndig * width_bytes + 1, "little")
    out = []
    for i in range(count):
        chunk = raw[i * width_bytes:(i + 1) * width_bytes]
        out.append(int.from_bytes(chunk, "little") - off)
    return out


def convolve_exact(a, b, n_out: int):
    """Exact truncated convolution of integer sequences (Kronecker packed)."""
    if not a or not b:
        return [0] * n_out
    ma = max(1, max(abs(c) for c in a))
    mb = max(1, max(abs(c) for c in b))
    bits = (ma * mb * min(len(a), len(b))).bit_length() + 3
    width = (bits + 7) // 8
    prod = _pack(a, width) * _pack(b, width)
    return _unpack(prod, width, n_out)


# ---------------------------------------------------------------------------
# QExpansion ring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QExpansion:
    """Truncated integer q-series of a fixed weight, exact coefficients 0..n_max."""

    weight: int
    coeffs: tuple
    n_max: int

    def __post_init__(self):
        if len(self.coeffs) != self.n_max + 1:
            raise ValueError("coeffs must have n_max + 1 entries")

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise ValueError("can only add forms of equal weight")
        n = min(self.n_max, other.n_max)
        return QExpansion(self.weight,
                          tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1)), n)

    def __mul__(self, other):
        if isinstance(other, int):
            return QExpansion(self.weight, tuple(other * c for c in self.coeffs), self.n_max)
        n = min(self.n_max, other.n_max)
        conv = convolve_exact(list(self.coeffs[:n + 1]), list(other.coeffs[:n + 1]), n + 1)
        return QExpansion(self.weight + other.weight, tuple(conv), n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QExpansion":
        if k < 1:
            raise ValueError("power must be >= 1")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def truncate(self, n_max: int) -> "QExpansion":
        if n_max > self.n_max:
            raise ValueError("cannot extend by truncation")
        return QExpansion(self.weight, self.coeffs[:n_max + 1], n_max)


def _sigma_table(power: int, n_max: int):
    sig = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d ** power
        for m in range(d, n_max + 1, d):
            sig[m] += dp
    return sig


def eisenstein_qexp(k: int, n_max: int) -> QExpansion:
    """E4 = 1 + 240 sum sigma_3(n) q^n; E6 = 1 - 504 sum sigma_5(n) q^n."""
    if k not in (4, 6):
        raise UnsupportedWeightError("Eisenstein generator weights are 4 and 6")
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    if k == 4:
        sig = _sigma_table(3, n_max)
        coeffs = [1] + [240 * sig[n] for n in range(1, n_max + 1)]
    else:
        sig = _sigma_table(5, n_max)
        coeffs = [1] + [-504 * sig[n] for n in range(1, n_max + 1)]
    return QExpansion(k, tuple(coeffs), n_max)


def delta_qexp(n_max: int) -> QExpansion:
    """Delta = q prod (1-q^n)^24, via the Jacobi cube: (eta^3)^8 shifted by q."""
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    m = n_max - 1  # series for prod(1-q^n)^24 up to q^m
    cube = [0] * (m + 1)
    j = 0
    while j * (j + 1) // 2 <= m:
        cube[j * (j + 1) // 2] = (-1) ** j * (2 * j + 1)
        j += 1
    sq = convolve_exact(cube, cube, m + 1)        # eta^6
    q4 = convolve_exact(sq, sq, m + 1)            # eta^12
    q8 = convolve_exact(q4, q4, m + 1)            # eta^24
    return QExpansion(12, tuple([0] + q8), n_max)


# ---------------------------------------------------------------------------
# one-dimensional cusp forms
# ---------------------------------------------------------------------------

class HoloFormData:
    """Normalized cusp form of a one-dimensional space: exact a(n), a(1) = 1,
    plus Deligne-normalized lambda(n) = a(n)/n^{(weight-1)/2}.

    Immutable after construction; the prime-power eigenvalue memo is built
    idempotently so concurrent readers are safe.
    """

    def __init__(self, weight: int, coeffs, n_max: int):
        self.weight = weight
        self.a = tuple(coeffs)
        self.n_max = n_max
        if self.a[1] != 1:
            raise ValueError("normalization a(1) = 1 violated")
        self._lambda_pp: dict = {}

    def lam(self, n: int) -> float:
        """lambda(n) for n <= n_max (stored coefficients)."""
        if not (1 <= n <= self.n_max):
            raise IndexError(f"n = {n} outside stored range 1..{self.n_max}")
        return self.a[n] / n ** ((self.weight - 1) / 2)

    def lam_extended(self, n: int) -> float:
        """lambda(n) for any n whose prime factors are <= n_max, via the
        Hecke recurrence lambda(p^{e+1}) = lambda(p)lambda(p^e) - lambda(p^{e-1})."""
        out = 1.0
        for p, e in _factorize(n):
            key = (p, e)
            if key not in self._lambda_pp:
                if p > self.n_max:
                    raise IndexError(f"prime {p} exceeds stored range")
                lp = self.lam(p)
                vals = [1.0, lp]
                while len(vals) <= e:
                    vals.append(lp * vals[-1] - vals[-2])
                for j in range(e + 1):
                    self._lambda_pp.setdefault((p, j), vals[j])
            out *= self._lambda_pp[key]
        return out


def _factorize(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def dim1_cuspform(weight: int, n_max: int) -> HoloFormData:
    """The unique normalized cusp form for weight in {12,16,18,20,22,26}."""
    if weight not in DIM1_WEIGHTS:
        raise UnsupportedWeightError(
            f"weight {weight} is not a one-dimensional cusp space (supported: {DIM1_WEIGHTS})")
    delta = delta_qexp(n_max)
    if weight == 12:
        form = delta
    else:
        e4 = eisenstein_qexp(4, n_max)
        e6 = eisenstein_qexp(6, n_max)
        extra = {16: lambda: e4,
                 18: lambda: e6,
                 20: lambda: e4 * e4,
                 22: lambda: e4 * e6,
                 26: lambda: e4 * e4 * e6}[weight]()
        form = delta * extra
    return HoloFormData(weight, form.coeffs, n_max)


def normalized_lambda(form: HoloFormData, n: int) -> float:
    """a(n)/n^{(weight-1)/2} for n <= n_max."""
    return form.lam(n)
