"""Arbitrary-precision special functions used by every other module.

Implementation notes (the precision story is part of the contract):

* log_gamma: shift until |w| clears a precision-dependent radius, then the
  Stirling series with Bernoulli coefficients; truncation stops at a term
  below the target and the shift radius guarantees the series reaches it.
* digamma: same shift + differentiated Stirling series.
* zeta / zeta_prime: Euler-Maclaurin with the standard Bernoulli tail bound
  |R_K| <= |(s)_{2K+1} B_{2K+2}/(2K+2)! N^{-s-2K-1}| * |s+2K+1|/(sigma+2K+1);
  N and K are grown until the bound certifies the working tolerance.
  zeta_prime differentiates the formula term by term (never finite
  differences).
* bessel_j: power series in big floats (cancellation ~1.44*x bits) below the
  switch point max(20, 2*order); above it the Hankel asymptotic series is
  used only when its first omitted term certifies the tolerance, else the
  series path is kept. (At order >~ 5 the nominal switch point lies outside
  the asymptotic series' accuracy floor, so the certificate is mandatory.)
* bessel_j_imag: big-float power series at >= 1.5*x + guard bits.
* bessel_k_imag: quadrature of K_{2it}(x) = int_0^inf e^{-x cosh u} cos(2tu) du
  at a precision raised by the cancellation estimate (pi*|t| - x)*log2(e).

All functions are pure; caches (Bernoulli numbers, Gauss nodes inside mpmath)
are immutable after construction.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .errors import NonConvergenceError, PoleInputError
from .precision import (DEFAULT_POLICY, PrecisionPolicy,
                        bessel_j_imag_cancellation_bits,
                        bessel_k_imag_cancellation_bits, workbits)


# ---------------------------------------------------------------------------
# Bernoulli numbers (exact)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_fraction(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2 == 1:
        return Fraction(0)
    # B_n = -1/(n+1) * sum_{k=0}^{n-1} C(n+1, k) B_k
    acc = Fraction(0)
    for k in range(n):
        acc += math.comb(n + 1, k) * bernoulli_fraction(k)
    return -acc / (n + 1)


def _bern(n: int) -> mp.mpf:
    b = bernoulli_fraction(n)
    return mp.mpf(b.numerator) / b.denominator


# ---------------------------------------------------------------------------
# log Gamma, Gamma_R, digamma
# ---------------------------------------------------------------------------

_POLE_TOL = 1e-12


def _check_gamma_pole(z: mp.mpc):
    if abs(z.imag) < _POLE_TOL:
        r = z.real
        if r < 0.5 and abs(r - mp.nint(r)) < _POLE_TOL:
            raise PoleInputError(f"Gamma pole at z = {complex(z)}")


def log_gamma(z, policy: PrecisionPolicy | None = None):
    """Principal-branch log Gamma(z), continuous off (-inf, 0].

    Working precision scales only with the policy: the shift radius
    max(14, 0.16*bits + 8) makes the Stirling minimum term smaller than the
    target, so no cancellation estimate is needed.
    """
    policy = policy or DEFAULT_POLICY
    wb = policy.effective_bits()
    with workbits(wb + 16):
        w = mp.mpc(z)
        _check_gamma_pole(w)
        radius = max(14.0, 0.16 * wb + 8.0)
        shift = mp.mpc(0)
        while not (w.real >= 1 and abs(w) >= radius):
            shift += mp.log(w)
            w += 1
        out = (w - mp.mpf(1) / 2) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
        out += _stirling_tail(w, wb)
        out -= shift
    return +out


def _stirling_tail(w, wb):
    eps = mp.mpf(2) ** (-wb - 8)
    acc = mp.mpc(0)
    w2 = w * w
    pw = w
    prev = mp.inf
    for k in range(1, 2 * wb):
        term = _bern(2 * k) / ((2 * k) * (2 * k - 1) * pw)
        at = abs(term)
        if at < eps:
            return acc + term
        if at > prev:
            raise NonConvergenceError("Stirling series diverged before target; shift radius too small")
        acc += term
        prev = at
        pw *= w2
    raise NonConvergenceError("Stirling series did not reach target")


def digamma(z, policy: PrecisionPolicy | None = None):
    """psi(z) = Gamma'(z)/Gamma(z) via shift + differentiated Stirling series."""
    policy = policy or DEFAULT_POLICY
    wb = policy.effective_bits()
    with workbits(wb + 16):
        w = mp.mpc(z)
        _check_gamma_pole(w)
        radius = max(14.0, 0.16 * wb + 8.0)
        shift = mp.mpc(0)
        while not (w.real >= 1 and abs(w) >= radius):
            shift += 1 / w
            w += 1
        out = mp.log(w) - 1 / (2 * w)
        eps = mp.mpf(2) ** (-wb - 8)
        w2 = w * w
        pw = w2
        prev = mp.inf
        for k in range(1, 2 * wb):
            term = _bern(2 * k) / ((2 * k) * pw)
            at = abs(term)
            if at < eps:
                out -= term
                break
            if at > prev:
                raise NonConvergenceError("digamma Stirling series diverged before target")
            out -= term
            prev = at
            pw *= w2
        else:
            raise NonConvergenceError("digamma Stirling series did not reach target")
        out -= shift
    return +out


def log_gamma_r(s, policy: PrecisionPolicy | None = None):
    """log of Gamma_R(s) = pi^{-s/2} Gamma(s/2)."""
    policy = policy or DEFAULT_POLICY
    wb = policy.effective_bits()
    with workbits(wb + 16):
        s = mp.mpc(s)
        out = -(s / 2) * mp.log(mp.pi) + log_gamma(s / 2, policy)
    return +out


def gamma_r(s, policy: PrecisionPolicy | None = None):
    """Gamma_R(s) = pi^{-s/2} Gamma(s/2)."""
    policy = policy or DEFAULT_POLICY
    wb = policy.effective_bits()
    with workbits(wb + 16):
        out = mp.exp(log_gamma_r(s, policy))
    return +out


# ---------------------------------------------------------------------------
# Riemann zeta and its derivative (Euler-Maclaurin)
# ---------------------------------------------------------------------------

def _zeta_em(s, wb: int, derivative: bool):
    """Euler-Maclaurin zeta with certified Bernoulli tail.

    Returns (value, derivative_or_None). Grows N, K until the tail bound
    (times a log N margin when differentiating) is below 2^-(wb+4).
    """
    s = mp.mpc(s)
    if abs(s - 1) < _POLE_TOL:
        raise PoleInputError("zeta pole at s = 1")
    eps = mp.mpf(2) ** (-wb - 4)
    sigma = s.real
    N = max(16, int(2 * abs(s.imag)) // 2 + 16)
    for _ in range(40):
        # find K certifying the tail at this N
        K = None
        bound_prev = mp.inf
        pk = s * (s + 1)  # (s)_{2k} running product, seeded at k=1
        k = 1
        while 2 * k + 2 < 2 * N * math.pi:  # EM terms decay only while 2k << 2 pi N
            # remainder after K=k terms
            b = abs(_bern(2 * k + 2)) / mp.factorial(2 * k + 2)
            poch_abs = abs(pk) * abs(s + 2 * k)  # |(s)_{2k+1}|
            bound = b * poch_abs * mp.mpf(N) ** (-sigma - 2 * k - 1)
            denom = sigma + 2 * k + 1
            if denom <= 0:
                bound = mp.inf  # simple remainder form needs sigma+2k+1 > 0
            else:
                bound *= abs(s + 2 * k + 1) / denom
            if derivative and mp.isfinite(bound):
                bound *= (mp.log(N) + 2 * k + 4)
            if bound < eps:
                K = k
                break
            if bound > 4 * bound_prev:
                break  # diverging: N too small
            bound_prev = bound
            pk *= (s + 2 * k) * (s + 2 * k + 1)
            k += 1
        if K is not None:
            return _zeta_em_eval(s, N, K, derivative)
        N *= 2
    raise NonConvergenceError(f"Euler-Maclaurin zeta failed to certify at s={complex(s)}")


def _zeta_em_eval(s, N, K, derivative):
    val = mp.mpc(0)
    dval = mp.mpc(0)
    for n in range(1, N):
        ns = mp.power(n, -s)
        val += ns
        if derivative:
            dval -= mp.log(n) * ns
    lnN = mp.log(N)
    NS = mp.power(N, -s)
    # N^{1-s}/(s-1)
    t = N * NS / (s - 1)
    val += t
    if derivative:
        dval += -lnN * t - N * NS / (s - 1) ** 2
    val += NS / 2
    if derivative:
        dval += -lnN * NS / 2
    # correction terms: B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}
    pk = mp.mpc(1)       # (s)_{2k-1} running
    dpk = mp.mpc(0)      # its s-derivative
    for k in range(1, K + 1):
        if k == 1:
            pk, dpk = s, mp.mpc(1)
        else:
            for j in (2 * k - 3, 2 * k - 2):
                dpk = dpk * (s + j) + pk
                pk = pk * (s + j)
        c = _bern(2 * k) / mp.factorial(2 * k)
        Npow = mp.power(N, -s - 2 * k + 1)
        val += c * pk * Npow
        if derivative:
            dval += c * (dpk * Npow + pk * (-lnN) * Npow)
    return val, (dval if derivative else None)


def zeta(s, policy: PrecisionPolicy | None = None):
    """Riemann zeta via Euler-Maclaurin with rigorous tail bound."""
    policy = policy or DEFAULT_POLICY
    wb = policy.effective_bits()
    with workbits(wb + 16):
        val, _ = _zeta_em(s, wb, derivative=False)
    return +val


def zeta_prime(s, policy: PrecisionPolicy | None = None):
    """zeta'(s), term-wise differentiated Euler-Maclaurin (analytic, not FD)."""
    policy = policy or DEFAULT_POLICY
    wb = policy.effective_bits()
    with workbits(wb + 16):
        _, dval = _zeta_em(s, wb, derivative=True)
    return +dval


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

def bessel_j(order: float, x: float, policy: PrecisionPolicy | None = None,
             abs_tol: float = 1e-14) -> float:
    """J_nu(x) for real order >= 0, x >= 0.

    Series below the switch point max(20, 2*order); certified Hankel
    asymptotic above it, with series fallback when the certificate fails.
    """
    if order < 0 or x < 0:
        raise ValueError("bessel_j requires order >= 0 and x >= 0")
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    switch = max(20.0, 2.0 * order)
    if x >= switch:
        got = _bessel_j_asymptotic(order, x, abs_tol)
        if got is not None:
            return got
    return _bessel_j_series(order, x, policy, abs_tol)


def _bessel_j_series(order, x, policy, abs_tol) -> float:
    policy = policy or DEFAULT_POLICY
    wp = policy.effective_bits(1.443 * x)
    with workbits(wp):
        nu = mp.mpf(order)
        xh = mp.mpf(x) / 2
        t = mp.exp(nu * mp.log(xh) - log_gamma(nu + 1, PrecisionPolicy(wp)))
        acc = t
        q = xh * xh
        m = 1
        while True:
            t = -t * q / (m * (nu + m))
            acc += t
            # certified geometric tail once the ratio falls below 1/2
            ratio = q / ((m + 1) * (nu + m + 1))
            if abs(t) < abs_tol * mp.mpf(2) ** (-policy.series_guard_bits) and ratio < 0.5:
                break
            m += 1
            if m > 8 * (x + order) + 4000:
                raise NonConvergenceError("bessel_j series did not converge")
        return float(mp.re(acc))


def _bessel_j_asymptotic(order, x, abs_tol):
    """Hankel expansion; returns None when the first omitted term fails to certify."""
    mu = 4.0 * order * order
    invx8 = 1.0 / (8.0 * x)
    a = 1.0
    p_terms = [1.0]
    q_terms = []
    m = 1
    min_seen = 1.0
    while m < 60:
        a *= (mu - (2 * m - 1) ** 2) / m * invx8
        (q_terms if m % 2 == 1 else p_terms).append(a)
        am = abs(a)
        if am < min_seen:
            min_seen = am
        if am < abs_tol / 8:
            break
        if am > 4 * min_seen:  # series turned around: floor reached
            break
        m += 1
    if min_seen >= abs_tol / 4:
        return None
    P = sum(t * (-1) ** i for i, t in enumerate(p_terms))
    Q = sum(t * (-1) ** i for i, t in enumerate(q_terms))
    w = x - (0.5 * order + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (math.cos(w) * P - math.sin(w) * Q)


def bessel_j_imag(t: float, x: float, policy: PrecisionPolicy | None = None):
    """J_{2it}(x) as an mpc, big-float power series.

    Precision is raised to the cancellation estimate ~1.5*x bits + guard;
    a hard-capped policy (max_bits) raises InsufficientPrecisionError first.
    """
    if x <= 0:
        raise ValueError("bessel_j_imag requires x > 0")
    policy = policy or DEFAULT_POLICY
    wp = policy.effective_bits(bessel_j_imag_cancellation_bits(x))
    with workbits(wp):
        nu = mp.mpc(0, 2 * t)
        xh = mp.mpf(x) / 2
        t0 = mp.exp(nu * mp.log(xh) - log_gamma(nu + 1, PrecisionPolicy(wp)))
        acc = t0
        q = xh * xh
        m = 1
        term = t0
        eps = mp.mpf(2) ** (-wp + 8)
        scale = abs(t0)
        while True:
            term = -term * q / (m * (nu + m))
            acc += term
            scale = max(scale, abs(term))
            ratio = q / ((m + 1) * abs(nu + m + 1))
            if abs(term) < eps * scale and ratio < 0.5:
                break
            m += 1
            if m > 8 * (x + abs(2 * t)) + 4000:
                raise NonConvergenceError("bessel_j_imag series did not converge")
    return +acc


def bessel_k_imag(t: float, x: float, policy: PrecisionPolicy | None = None):
    """K_{2it}(x) (real) via int_0^inf e^{-x cosh u} cos(2tu) du.

    The integrand scale is e^{-x} while the value is ~e^{-pi|t|}, so the
    working precision carries the (pi|t| - x) cancellation estimate.
    """
    if x <= 0:
        raise ValueError("bessel_k_imag requires x > 0")
    policy = policy or DEFAULT_POLICY
    wp = policy.effective_bits(bessel_k_imag_cancellation_bits(t, x))
    with workbits(wp):
        xm = mp.mpf(x)
        tm = mp.mpf(t)
        umax = mp.acosh(1 + (wp + 8) * mp.log(2) / xm)
        # split at the zeros of cos(2tu) so each piece is non-oscillatory
        pts = [mp.mpf(0)]
        if t != 0:
            half = mp.pi / (2 * abs(tm))
            k = 1
            while k * half < umax:
                pts.append(k * half)
                k += 1
        pts.append(umax)
        val = mp.quad(lambda u: mp.exp(-xm * mp.cosh(u)) * mp.cos(2 * tm * u), pts)
        val = mp.re(val)
    return +val
