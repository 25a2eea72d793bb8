"""specialfn: spec examples, independent oracles, and invariant grids."""

import math

import mpmath as mp
import numpy as np
import pytest
import scipy.special as sps

from mixmoment.errors import PoleInputError
from mixmoment.precision import PrecisionPolicy
from mixmoment.specialfn import (bernoulli_fraction, bessel_j, bessel_j_imag,
                                 bessel_k_imag, digamma, gamma_r, log_gamma,
                                 zeta, zeta_prime)

EULER = float(mp.euler)


# ---------------------------------------------------------------------------
# oracles (independent of the implementation paths they check)
# ---------------------------------------------------------------------------

def shift_stirling_oracle(z, shifts=8, terms=10):
    """log Gamma via `shifts` recurrence steps then a fixed-term Stirling series.

    Uses mpmath's own bernoulli() so the coefficients are independent of the
    package's Fraction recurrence.
    """
    with mp.workprec(250):
        w = mp.mpc(z)
        acc = mp.mpc(0)
        for _ in range(shifts):
            acc += mp.log(w)
            w += 1
        out = (w - mp.mpf(1) / 2) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
        for k in range(1, terms + 1):
            out += mp.bernoulli(2 * k) / ((2 * k) * (2 * k - 1) * w ** (2 * k - 1))
        return out - acc


def zeta_partial_sum_oracle(s, n_terms=10 ** 4):
    """Direct sum + integral-tail correction for real s > 1 (Euler-Maclaurin tail)."""
    with mp.workprec(120):
        s = mp.mpf(s)
        N = n_terms
        acc = mp.nsum(lambda n: n ** (-s), [1, N])
        # sum_{n>N} n^{-s} = N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12 - ...
        acc += mp.mpf(N) ** (1 - s) / (s - 1) - mp.mpf(N) ** (-s) / 2
        acc += s * mp.mpf(N) ** (-s - 1) / 12
        acc -= s * (s + 1) * (s + 2) * mp.mpf(N) ** (-s - 3) / 720
        return acc


def bessel_series_oracle(order, x, prec_bits=400):
    """Truncated power series at doubled precision (test-local loop)."""
    with mp.workprec(prec_bits):
        xh = mp.mpf(x) / 2
        term = xh ** order / mp.factorial(order)
        acc = term
        for m in range(1, 2000):
            term = -term * xh * xh / (m * (order + m))
            acc += term
            if abs(term) < mp.mpf(2) ** (-prec_bits):
                break
        return acc


def k_imag_quadrature_oracle(t, x):
    """Direct mpmath quadrature of the cosh-integral representation."""
    with mp.workprec(150):
        f = lambda u: mp.exp(-x * mp.cosh(u)) * mp.cos(2 * t * u)
        return mp.quad(f, [0, 2, 5, 12])


# ---------------------------------------------------------------------------
# log_gamma
# ---------------------------------------------------------------------------

def test_log_gamma_trivial_values():
    assert abs(log_gamma(1)) < 1e-15
    assert abs(log_gamma(0.5) - mp.log(mp.sqrt(mp.pi))) < 1e-15


def test_log_gamma_shift_oracle():
    got = log_gamma(10 + 10j)
    want = shift_stirling_oracle(10 + 10j)
    assert abs(got - want) < 1e-14


def test_log_gamma_pole_inputs():
    for z in (0, -1, -7):
        with pytest.raises(PoleInputError):
            log_gamma(z)


def test_log_gamma_matches_scipy_grid():
    rng = np.random.default_rng(7)
    zs = rng.uniform(0.2, 30, 40) + 1j * rng.uniform(-40, 40, 40)
    for z in zs:
        assert abs(complex(log_gamma(z)) - sps.loggamma(z)) < 1e-12


def test_gamma_recurrence_grid():
    rng = np.random.default_rng(11)
    zs = rng.uniform(0.2, 20, 100) + 1j * rng.uniform(-20, 20, 100)
    for z in zs:
        lhs = log_gamma(z + 1)
        rhs = log_gamma(z) + mp.log(mp.mpc(z))
        assert abs(lhs - rhs) < 1e-13


def test_gamma_reflection():
    rng = np.random.default_rng(13)
    zs = rng.uniform(0.1, 0.9, 25) + 1j * rng.uniform(-5, 5, 25)
    for z in zs:
        val = mp.exp(log_gamma(z) + log_gamma(1 - complex(z)))
        want = mp.pi / mp.sin(mp.pi * mp.mpc(z))
        assert abs(val - want) < 1e-12 * abs(want)


# ---------------------------------------------------------------------------
# gamma_r
# ---------------------------------------------------------------------------

def test_gamma_r_trivial():
    assert abs(gamma_r(1) - 1) < 1e-15
    assert abs(gamma_r(2) - 1 / mp.pi) < 1e-15


def test_gamma_r_laurent_pole_at_zero():
    # s*Gamma_R(s) -> 2 along s = 10^{-j} (Laurent coefficient via samples)
    vals = [abs(mp.mpf(10) ** (-j) * gamma_r(mp.mpf(10) ** (-j)) - 2) for j in range(1, 7)]
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
    assert vals[-1] < 1e-5


# ---------------------------------------------------------------------------
# digamma
# ---------------------------------------------------------------------------

def test_digamma_quarter_closed_form():
    want = -mp.euler - mp.pi / 2 - 3 * mp.log(2)
    assert abs(digamma(mp.mpf(1) / 4) - want) < 1e-14


def test_digamma_three_quarter_reflection():
    assert abs(digamma(0.75) - digamma(0.25) - mp.pi) < 1e-14


def test_digamma_at_two():
    assert abs(digamma(2) - (1 - mp.euler)) < 1e-14


def test_digamma_recurrence_grid():
    rng = np.random.default_rng(17)
    zs = rng.uniform(0.2, 15, 100) + 1j * rng.uniform(-15, 15, 100)
    for z in zs:
        assert abs(digamma(z + 1) - digamma(z) - 1 / mp.mpc(z)) < 1e-13


def test_digamma_pole():
    with pytest.raises(PoleInputError):
        digamma(-3)


# ---------------------------------------------------------------------------
# zeta / zeta'
# ---------------------------------------------------------------------------

def test_zeta_classical_values():
    assert abs(zeta(2) - mp.pi ** 2 / 6) < 1e-15
    assert abs(zeta(0) + 0.5) < 1e-15


def test_zeta_partial_sum_oracle():
    got = zeta(1.5)
    want = zeta_partial_sum_oracle(1.5)
    assert abs(got - want) < 1e-12 * abs(want)


def test_zeta_pole():
    with pytest.raises(PoleInputError):
        zeta(1)


def test_zeta_laurent_residue():
    resid = [abs((s - 1) * zeta(s) - 1)
             for s in (1 + mp.mpf(10) ** (-j) for j in range(1, 7))]
    assert all(b < a for a, b in zip(resid, resid[1:]))


def test_zeta_prime_analytic_vs_mpmath():
    for s in (1.5, 3.0, 0.5 + 14j, 2 + 30j):
        assert abs(zeta_prime(s) - mp.zeta(mp.mpc(s), derivative=1)) < 1e-13


def test_zeta_critical_line_vs_mpmath():
    for t in (14.0, 100.0, 543.7):
        got = zeta(0.5 + 1j * t)
        want = mp.zeta(mp.mpc(0.5, t))
        assert abs(got - want) < 1e-12 * max(1.0, abs(want))


# ---------------------------------------------------------------------------
# bessel_j (real order)
# ---------------------------------------------------------------------------

def test_bessel_j_trivial():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(11, 0.0) == 0.0


def test_bessel_j_series_oracle():
    got = bessel_j(11, 5.0)
    want = bessel_series_oracle(11, 5.0)
    assert abs(got - float(want)) < 1e-14


def test_bessel_j_switch_overlap_band():
    # series and certified asymptotic agree across the switch point
    for nu in (0, 1, 3):
        for x in (19.0, 20.0, 21.0, 25.0, 60.0):
            from mixmoment.specialfn import _bessel_j_asymptotic, _bessel_j_series
            asym = _bessel_j_asymptotic(nu, x, 1e-14)
            ser = _bessel_j_series(nu, x, None, 1e-14)
            if asym is not None:
                assert abs(asym - ser) < 5e-14


def test_bessel_j_large_order_falls_back_to_series():
    # at order 25, x = 2*order the Hankel series cannot certify 1e-14
    from mixmoment.specialfn import _bessel_j_asymptotic
    assert _bessel_j_asymptotic(25, 50.0, 1e-14) is None
    got = bessel_j(25, 50.0)
    assert abs(got - float(mp.besselj(25, mp.mpf(50)))) < 1e-13


def test_bessel_j_scipy_grid():
    rng = np.random.default_rng(23)
    for _ in range(30):
        nu = float(rng.integers(0, 26))
        x = float(rng.uniform(0.1, 260.0))
        assert abs(bessel_j(nu, x) - sps.jv(nu, x)) < 5e-12


# ---------------------------------------------------------------------------
# imaginary-order Bessel
# ---------------------------------------------------------------------------

def test_bessel_k_imag_reduces_to_k0():
    got = bessel_k_imag(0, 1.0)
    want = k_imag_quadrature_oracle(0, 1.0)
    assert abs(got - want) < 1e-14


def test_bessel_j_imag_reduces_to_j0():
    assert abs(bessel_j_imag(0, 3.0) - mp.besselj(0, 3)) < 1e-14


def test_bessel_j_imag_conjugate_symmetry():
    a = bessel_j_imag(3.0, 10.0)
    b = bessel_j_imag(-3.0, 10.0)
    assert abs(a - mp.conj(b)) < 1e-10 * abs(a)


def test_bessel_j_imag_insufficient_precision_error():
    from mixmoment.errors import InsufficientPrecisionError
    pol = PrecisionPolicy(working_bits=64, max_bits=128)
    with pytest.raises(InsufficientPrecisionError):
        bessel_j_imag(5.0, 200.0, pol)


def test_bessel_k_imag_real_and_decaying_in_x():
    rng = np.random.default_rng(29)
    for _ in range(8):
        t = float(rng.uniform(0.0, 4.0))
        x1 = float(rng.uniform(2 * abs(t) + 0.5, 2 * abs(t) + 4))
        x2 = x1 + float(rng.uniform(0.5, 3))
        k1 = bessel_k_imag(t, x1)
        k2 = bessel_k_imag(t, x2)
        assert k2 < k1


# ---------------------------------------------------------------------------
# determinism and internals
# ---------------------------------------------------------------------------

def test_bernoulli_fractions_match_mpmath():
    for n in (2, 4, 12, 30):
        assert abs(float(bernoulli_fraction(n)) - float(mp.bernoulli(n))) < 1e-12 * abs(float(mp.bernoulli(n)))


def test_determinism_bit_identical():
    pol = PrecisionPolicy(working_bits=128)
    pairs = [
        (lambda: log_gamma(3.7 + 2.2j, pol)),
        (lambda: zeta(0.5 + 37.2j, pol)),
        (lambda: bessel_j_imag(4.0, 22.0, pol)),
        (lambda: bessel_k_imag(6.0, 9.0, pol)),
    ]
    for f in pairs:
        a, b = f(), f()
        assert mp.mpf(abs(a - b)) == 0
