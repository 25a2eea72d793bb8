"""Exact exponential sums: Kloosterman sums, divisor coefficients eta_t,
and the off-diagonal arithmetic part G+- with its Gauss-sum closed form.

Phase discipline: every additive character is reduced to an exact rational
k/q (q = c or 4c) before any floating evaluation, and e(k/q) is taken from a
root-of-unity table built once per denominator. The half-integer shift in G2
is evaluated through (2b+1)^2 over the doubled modulus with the inverse of x
taken mod 4c; taking it mod c only would leave the sum ill-defined up to a
factor e(-1/4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetError, NonCoprimeError

C_DIRECT_MAX_DEFAULT = 200


# ---------------------------------------------------------------------------
# modular helpers
# ---------------------------------------------------------------------------

def mod_inverse(d: int, c: int) -> int:
    """Inverse of d mod c in [0, c)."""
    if c < 1:
        raise ValueError("modulus must be >= 1")
    if c == 1:
        return 0
    try:
        return pow(d % c, -1, c)
    except ValueError as exc:
        raise NonCoprimeError(f"gcd({d}, {c}) != 1") from exc


@lru_cache(maxsize=4096)
def _units_and_inverses(c: int):
    """Sorted units mod c with their inverses (immutable arrays)."""
    d = np.arange(1, c)
    d = d[np.gcd(d, c) == 1]
    inv = np.array([pow(int(x), -1, c) for x in d], dtype=np.int64)
    arrs = (d.astype(np.int64), inv)
    for a in arrs:
        a.setflags(write=False)
    return arrs


@lru_cache(maxsize=4096)
def _roots_of_unity(q: int):
    """e(k/q) for k in [0, q)."""
    w = np.exp(2j * np.pi * np.arange(q) / q)
    w.setflags(write=False)
    return w


def divisors(m: int) -> list[int]:
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            if d * d != m:
                out.append(m // d)
        d += 1
    return sorted(out)


def tau(m: int) -> int:
    return len(divisors(m))


def weil_bound(a: int, b: int, c: int) -> float:
    """tau(c) * gcd(a, b, c)^{1/2} * c^{1/2}."""
    g = math.gcd(math.gcd(abs(a), abs(b)), c)
    if g == 0:
        g = c
    return tau(c) * math.sqrt(g) * math.sqrt(c)


# ---------------------------------------------------------------------------
# Kloosterman sums
# ---------------------------------------------------------------------------

def kloosterman_complex(a: int, b: int, c: int) -> complex:
    """S(a,b;c) as the raw complex accumulation (imaginary part ~ rounding)."""
    if c < 1:
        raise ValueError("modulus must be >= 1")
    if c == 1:
        return 1.0 + 0.0j
    d, dinv = _units_and_inverses(c)
    k = (a % c) * d + (b % c) * dinv
    w = _roots_of_unity(c)
    return complex(np.sum(w[k % c]))


def kloosterman(a: int, b: int, c: int) -> float:
    """Classical Kloosterman sum S(a,b;c); real by the d <-> -d pairing."""
    return kloosterman_complex(a, b, c).real


def eta_t(m: int, t: float) -> float:
    """eta_t(m) = sum_{ab=m} (a/b)^{it}; real, and tau(m) at t = 0."""
    if m < 1:
        raise ValueError("m must be >= 1")
    acc = 0.0
    for d in divisors(m):
        q = m // d
        if d < q:
            acc += 2.0 * math.cos(t * math.log(d / q))
        elif d == q:
            acc += 1.0
    return acc


# ---------------------------------------------------------------------------
# the arithmetic part G_{+-}
# ---------------------------------------------------------------------------

def _sign_factor(sign) -> int:
    if sign in ("+", +1, 1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def g_direct_reference(x1: int, x2: int, c: int, sign="+") -> complex:
    """Un-collapsed O(c^3) triple sum; test reference for c <= 30."""
    if c > 30:
        raise BudgetError("reference path is restricted to c <= 30")
    if c == 1:
        return 1.0 + 0.0j
    sg = _sign_factor(sign)
    w = _roots_of_unity(c)
    d, dinv = _units_and_inverses(c)
    acc = 0.0 + 0.0j
    for a in range(c):
        for b in range(c):
            s_ab = np.sum(w[(sg * a * d + b * b * dinv) % c])
            acc += s_ab * w[(a * x1 + b * x2) % c]
    return complex(acc) / c ** 3


def g_direct(x1: int, x2: int, c: int, sign="+",
             c_direct_max: int = C_DIRECT_MAX_DEFAULT) -> complex:
    """G_{+-}(x1,x2;c) = c^{-3} sum_{a,b} S(+-a, b^2; c) e((a x1 + b x2)/c).

    The a-sum is collapsed analytically: it forces the Kloosterman unit
    k == -(+-x1) and in particular vanishes unless gcd(x1, c) = 1, leaving a
    single exact-phase b-sum. (The O(c^3) definition lives in
    g_direct_reference for tests.)
    """
    if c < 1:
        raise ValueError("modulus must be >= 1")
    if c > c_direct_max:
        raise BudgetError(f"c = {c} exceeds c_direct_max = {c_direct_max}")
    if c == 1:
        return 1.0 + 0.0j
    sg = _sign_factor(sign)
    y = sg * x1
    if math.gcd(y % c, c) != 1:
        return 0.0 + 0.0j
    kbar = mod_inverse(-y, c)
    b = np.arange(c, dtype=np.int64)
    w = _roots_of_unity(c)
    phases = (kbar * b * b + (x2 % c) * b) % c
    return complex(np.sum(w[phases])) / c ** 2


@lru_cache(maxsize=2048)
def _squares_fft(c: int):
    """F[k] = sum_b e(-k b^2 / c): FFT (kernel e(-ks/c)) of the b^2 histogram."""
    b = np.arange(c, dtype=np.int64)
    cnt = np.bincount((b * b) % c, minlength=c).astype(float)
    out = np.fft.fft(cnt)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=2048)
def _half_squares_fft(c: int):
    """F2[k] = sum_{b mod c} e(-k (2b+1)^2 / (4c)) over the doubled modulus."""
    q = 4 * c
    b = np.arange(c, dtype=np.int64)
    cnt = np.bincount(((2 * b + 1) ** 2) % q, minlength=q).astype(float)
    out = np.fft.fft(cnt)
    out.setflags(write=False)
    return out


def gauss_g1(x: int, c: int) -> complex:
    """G1(x;c) = (chi_c(x)/c^2) sum_b e(-xbar b^2 / c)."""
    if c == 1:
        return 1.0 + 0.0j
    if math.gcd(x % c, c) != 1:
        return 0.0 + 0.0j
    return complex(_squares_fft(c)[mod_inverse(x, c)]) / c ** 2


def gauss_g2(x: int, c: int) -> complex:
    """G2(x;c) = (chi_c(x)/c^2) sum_b e(-xbar (b + 1/2)^2 / c).

    The inverse is taken mod 4c (needs x odd); only called when x is odd.
    """
    if c == 1:
        return complex(np.exp(-2j * np.pi * mod_inverse(x, 4) / 4))
    if math.gcd(x % c, c) != 1:
        return 0.0 + 0.0j
    if x % 2 == 0:
        raise ValueError("G2 requires odd x (inverse mod 4c)")
    xbar4 = mod_inverse(x, 4 * c)
    return complex(_half_squares_fft(c)[xbar4]) / c ** 2


def _chi2(n: int) -> int:
    """Principal character mod 2."""
    return n & 1


@dataclass(frozen=True)
class GSumDecomposition:
    """G_{+-} through Gauss-sum components, parity coefficients, and the
    extracted quadratic phase e(-+ x1 x2^2 / (4c))."""

    c: int
    x1: int
    x2: int
    sign: str
    g1: complex
    g2: complex
    parity_coeffs: tuple[complex, complex, complex]
    phase: complex

    def gprime(self) -> complex:
        """G'_{+-} = phase * G_{+-}: the parity-weighted G1/G2 combination."""
        a, b, cc = self.parity_coeffs
        return a * self.g1 + b * self.g1 + cc * self.g2

    def assembled(self) -> complex:
        """Reassembled G_{+-}(x1,x2;c) = phase^{-1} * gprime."""
        return self.gprime() / self.phase


def g_closed(x1: int, x2: int, c: int, sign="+") -> GSumDecomposition:
    """Closed form of G_{+-} via G1/G2 and the parity decomposition.

    Uses G_-(x1,x2;c) = G_+(-x1,x2;c) to reduce to the + case with y = -+x1:
    G'_+(y,x2;c) = G1(y;c)(1-chi2(y))chi2(x2) + G1(y;c)(1-chi2(x2))
                   + G2(y;c)chi2(y)chi2(x2).

    When y*x2 is even the exact completed-square constant is e(ybar h^2/c)
    with h = y*x2/2, which differs from the displayed e(y x2^2/(4c)) by the
    exact unit e(j*y*x2^2/4), ybar*y = 1 + j*c (a -1 exactly when y == 2
    (mod 4) and x2 is odd). That unit is folded into the G1 parity
    coefficients so that reassembly is exact, not just bounded.
    """
    if c < 1:
        raise ValueError("modulus must be >= 1")
    sg = _sign_factor(sign)
    y = sg * x1
    q = 4 * c
    # phase = e(-+ x1 x2^2 / 4c) with the top sign for '+'  (== e(-y x2^2/4c))
    k = (-y * x2 * x2) % q
    phase = complex(np.exp(2j * np.pi * k / q))
    coeffs = (complex((1 - _chi2(y)) * _chi2(x2)),
              complex(1 - _chi2(x2)),
              complex(_chi2(y) * _chi2(x2)))
    tag = "+" if sg == 1 else "-"
    if c > 1 and math.gcd(y % c, c) != 1:
        return GSumDecomposition(c, x1, x2, tag, 0.0j, 0.0j, coeffs, phase)
    if _chi2(y) and _chi2(x2):
        g2 = gauss_g2(y, c)
        return GSumDecomposition(c, x1, x2, tag, gauss_g1(y, c), g2, coeffs, phase)
    # even y*x2: exact unit e(ybar h^2/c - y x2^2/(4c)) multiplies the G1 terms
    ybar = mod_inverse(y, c) if c > 1 else 0
    h = (y * x2) // 2
    knum = (4 * ybar * h * h - y * x2 * x2) % q
    eps = complex(np.exp(2j * np.pi * knum / q))
    coeffs = (coeffs[0] * eps, coeffs[1] * eps, coeffs[2])
    return GSumDecomposition(c, x1, x2, tag, gauss_g1(y, c), 0.0j, coeffs, phase)


def g_second_moment(x1: int, C: int, which: str = "G1"):
    """(value, normalized) with value = sum_{C <= c < 2C} |G_i(x1;c)|^2 and
    normalized = value * C^2 (bounded as C grows, per the orthogonality bound).

    Evaluates the single needed character sum per modulus directly (the FFT
    tables in gauss_g1/g2 pay off only when all residues are consumed).
    """
    if C < 2:
        raise ValueError("C must be >= 2")
    if which not in ("G1", "G2"):
        raise ValueError("which must be 'G1' or 'G2'")
    if which == "G2" and x1 % 2 == 0:
        return 0.0, 0.0
    acc = 0.0
    for c in range(C, 2 * C):
        if math.gcd(x1 % c, c) != 1:
            continue
        b = np.arange(c, dtype=np.int64)
        if which == "G1":
            k = (mod_inverse(x1, c) * b * b) % c
            s = np.exp(-2j * np.pi * k / c).sum()
        else:
            q = 4 * c
            k = (mod_inverse(x1, q) * (2 * b + 1) ** 2) % q
            s = np.exp(-2j * np.pi * k / q).sum()
        acc += abs(s / c ** 2) ** 2
    return acc, acc * C * C
