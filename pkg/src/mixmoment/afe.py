"""Approximate-functional-equation weights and central L-values.

Eisenstein (continuous) family: the Lemma-2.1/2.2 weights

  W(m,t) = (1/2pi i) int Gamma_R(1/2+s+it)Gamma_R(1/2+s-it) /
                         (Gamma_R(1/2+it)Gamma_R(1/2-it)) m^{-s} e^{s^2} ds/s
  V(n,t) = same with the sym^2 gamma factors and zeta(1+2s),

with the fixed mollifier G(s)=e^{s^2} (ContourSpec), an exact-gamma-ratio and
a Stirling-simplified variant, and the Taylor refinement in (t^2-T^2)/T^2.

The e^{s^2} mollifier makes the weights decay like erfc(log(2 pi m/t)/2)
(log-normal, not power): the certified truncation for a 1e-9 absolute tail is
m ~ 1.5e5 at t = 50 and ~2e6 at t = 500. Tails are certified by a sigma-shift
bound: for any sigma > 0 (no poles to the right of the contour),
|W(m,t)| <= m^{-sigma} * (1/2pi) int |integrand(sigma+iv)| dv, minimized over
a sigma grid, combined with exact divisor partial sums. (The spec's fixed
"m <= 20t with A=5" rule carries the e^{A^2} constant of the mollifier and
cannot certify 1e-6; see the recorded constant in the tests.)

Holomorphic family: U_k(m) (weight w = 4k, Gamma(y+2k)/Gamma(2k) kernel) and
the sym^2 weight V_{4k}(n), under two admissible mollifiers:
  * "gauss":       G(y) = e^{y^2}  (the displayed form)
  * "gamma-sharp": G(y) = 1, where the gamma factors supply the vertical
    decay; then U_k(m) = Q_{2k}(2 pi m) (regularized incomplete gamma) and
    the weights decay exponentially in m -- this is what makes the
    trace-formula route's (m,n,c) sums feasible.
Mollifier independence of the L-values is itself a verified oracle.

Vectorized contour coefficients use scipy.special.loggamma; tests pin it
against specialfn.log_gamma. Bulk zeta values on contours use the scalar
Euler-Maclaurin zeta (cached per kernel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
import scipy.special as sps

from .arithmetic import tau
from .errors import TruncationBudgetError
from .quadrature import gauss_nodes
from .specialfn import zeta as zeta_mp

EULER = float(mp.euler)
LOG2 = math.log(2.0)
LOGPI = math.log(math.pi)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContourSpec:
    """Vertical-line contour with the fixed mollifier G(s) = e^{s^2}."""

    sigma: float = 0.25
    height: float | None = None          # None -> (log T)^2 scaling
    variant: str = "exact-gamma-ratio"   # or "stirling-simplified"

    def __post_init__(self):
        if self.variant not in ("exact-gamma-ratio", "stirling-simplified"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.height is not None and self.height <= 0:
            raise ValueError("height must be positive")

    def mollifier(self, s):
        return np.exp(s * s)

    def height_for(self, t: float) -> float:
        return self.height if self.height is not None else math.log(max(t, 10.0)) ** 2


@dataclass(frozen=True)
class SpectralWindow:
    """(T, Delta) localization for the Maass/Eisenstein family."""

    T: float
    Delta: float

    def __post_init__(self):
        if self.T < 10:
            raise ValueError("T must be >= 10")
        if not (1 <= self.Delta <= self.T):
            raise ValueError("need 1 <= Delta <= T")


# ---------------------------------------------------------------------------
# contour kernels: F(x) = Re sum_j coef_j x^{-s_j}
# ---------------------------------------------------------------------------

def _loggamma_r_vec(s):
    """log Gamma_R(s) = -(s/2) log pi + log Gamma(s/2), vectorized."""
    s = np.asarray(s, dtype=complex)
    return -(s / 2) * LOGPI + sps.loggamma(s / 2)


class ContourKernel:
    """Quadrature discretization of (1/2pi) int f(sigma+iv) x^{-(sigma+iv)} dv.

    coef absorbs everything but the x-power; eval returns the real part.
    log_abs_bound() is the sigma-shift tail certificate log((1/2pi)int|f|):
    |F(x)| <= exp(log_abs_bound) * x^{-sigma} for x >= 1.
    """

    def __init__(self, s_nodes, log_f, weights):
        self.s = np.asarray(s_nodes)
        self.sigma = float(self.s[0].real)
        self._log_f = np.asarray(log_f)
        scale = self._log_f.real.max()
        self.coef = weights / (2 * np.pi) * np.exp(self._log_f - scale)
        self._scale = scale
        self._logabs = scale + math.log(
            float(np.sum(np.abs(weights / (2 * np.pi)) * np.exp(self._log_f.real - scale))))

    def eval(self, x):
        """F(x) for scalar or array x > 0."""
        x = np.asarray(x, dtype=float)
        u = np.log(x)
        vals = np.exp(self._scale - np.multiply.outer(u, self.s)) @ self.coef
        return vals.real if vals.shape else float(vals.real)

    def log_abs_bound(self) -> float:
        return self._logabs


def _contour_nodes(sigma: float, vmax: float, max_log_x: float, freq: float = 0.0):
    """Panelled Gauss nodes on the vertical segment [sigma-i vmax, sigma+i vmax].

    The x^{-iv} factor oscillates at max_log_x rad per unit v and the kernel's
    gamma ratio at ~freq (e.g. log(t/2pi) for the Lemma-2.1 ratio); panel
    count resolves both.
    """
    cycles = vmax * (max_log_x + freq + 2.0) / (2 * math.pi)
    panels = max(12, int(math.ceil(3 * cycles)))
    v, w = gauss_nodes(-vmax, vmax, panels)
    return sigma + 1j * v, w


_SIGMA_GRID = (1.0, 2.0, 4.0, 6.0, 9.0, 13.0, 18.0, 24.0)


@lru_cache(maxsize=512)
def _w_kernel(t: float, sigma: float, height: float, variant: str,
              max_log_x: float, taylor_l: int = 0) -> ContourKernel:
    vmax = min(height, math.sqrt(40.0 + sigma * sigma) + 4.0)
    s, w = _contour_nodes(sigma, vmax, max_log_x, freq=abs(math.log(t / (2 * math.pi))))
    if variant == "exact-gamma-ratio":
        log_ratio = (_loggamma_r_vec(0.5 + s + 1j * t) + _loggamma_r_vec(0.5 + s - 1j * t)
                     - _loggamma_r_vec(0.5 + 1j * t) - _loggamma_r_vec(0.5 - 1j * t))
    else:
        log_ratio = s * math.log(t / (2 * math.pi))
    log_f = log_ratio + s * s - np.log(s)
    if taylor_l:
        log_f = log_f + np.log(_taylor_poly(s, taylor_l).astype(complex))
    return ContourKernel(s, log_f, w)


@lru_cache(maxsize=512)
def _v_kernel(t: float, sigma: float, height: float, variant: str,
              max_log_x: float, taylor_l: int = 0) -> ContourKernel:
    vmax = min(height, math.sqrt(40.0 + sigma * sigma) + 4.0)
    s, w = _contour_nodes(sigma, vmax, max_log_x, freq=abs(math.log(t / math.pi)) + 1.0)
    if variant == "exact-gamma-ratio":
        log_ratio = (_loggamma_r_vec(0.5 + s + 2j * t) + _loggamma_r_vec(0.5 + s)
                     + _loggamma_r_vec(0.5 + s - 2j * t)
                     - _loggamma_r_vec(0.5 + 2j * t) - _loggamma_r_vec(0.5)
                     - _loggamma_r_vec(0.5 - 2j * t))
    else:
        log_ratio = (s * math.log(t / math.pi)
                     + _loggamma_r_vec(0.5 + s) - _loggamma_r_vec(0.5))
    zvals = np.array([complex(zeta_mp(complex(1 + 2 * sj))) for sj in s])
    log_f = log_ratio + np.log(zvals) + s * s - np.log(s)
    if taylor_l:
        log_f = log_f + np.log(_taylor_poly(s, taylor_l).astype(complex))
    return ContourKernel(s, log_f, w)


def _taylor_poly(s, l: int):
    """P_l(s) = binom(s/2, l): t^s = T^s sum_l P_l(s) ((t^2-T^2)/T^2)^l."""
    out = np.ones_like(s)
    for i in range(l):
        out = out * (s / 2 - i) / (i + 1)
    return out


def weight_W(m: float, t: float, contour: ContourSpec | None = None) -> float:
    """Lemma-2.1 weight W(m,t); even in t."""
    contour = contour or ContourSpec()
    t = abs(t)
    if t < 10:
        raise ValueError("weight_W requires t >= 10")
    ker = _w_kernel(t, contour.sigma, contour.height_for(t), contour.variant,
                    max_log_x=max(1.0, math.log(m + 1)))
    return float(ker.eval(float(m)))


def weight_V(n: float, t: float, contour: ContourSpec | None = None) -> float:
    """Lemma-2.2 weight V(n,t) (sym^2 gamma factors and zeta(1+2s)); even in t."""
    contour = contour or ContourSpec()
    t = abs(t)
    if t < 10:
        raise ValueError("weight_V requires t >= 10")
    ker = _v_kernel(t, contour.sigma, contour.height_for(t), contour.variant,
                    max_log_x=max(1.0, math.log(n + 1)))
    return float(ker.eval(float(n)))


def taylor_weight(m: float, t: float, T: float, L: int, kind: str = "W",
                  window: SpectralWindow | None = None,
                  contour: ContourSpec | None = None) -> float:
    """Partial sum sum_{l<=L} W_l(m,T) ((t^2-T^2)/T^2)^l of the Taylor
    refinement (targets the Stirling-simplified weight, whose kernel the
    polynomials P_l(s) = binom(s/2, l) expand)."""
    if L < 0:
        raise ValueError("L must be >= 0")
    contour = contour or ContourSpec(variant="stirling-simplified")
    if window is not None:
        if abs(t - T) > window.Delta * math.log(T) ** 2:
            raise TruncationBudgetError("t outside the Taylor window |t-T| <= Delta log^2 T")
    x = (t * t - T * T) / (T * T)
    if abs(x) > 0.75:
        raise TruncationBudgetError(f"Taylor variable (t^2-T^2)/T^2 = {x:.3f} too large")
    build = _w_kernel if kind == "W" else _v_kernel
    acc = 0.0
    height = contour.height_for(T)
    for l in range(L + 1):
        ker = build(T, contour.sigma, height, "stirling-simplified",
                    max(1.0, math.log(m + 1)), taylor_l=l)
        acc += float(ker.eval(float(m))) * x ** l
    return acc


# ---------------------------------------------------------------------------
# direct central values
# ---------------------------------------------------------------------------

def central_zeta(t: float) -> float:
    """|zeta(1/2+it)|^2 via the Euler-Maclaurin zeta."""
    z = zeta_mp(mp.mpc(0.5, t))
    return float(mp.re(z) ** 2 + mp.im(z) ** 2)


def zeta_half() -> float:
    return float(mp.re(zeta_mp(mp.mpf(0.5))))


# ---------------------------------------------------------------------------
# eta sieves (multiplicative assembly over smallest prime factors)
# ---------------------------------------------------------------------------

def _spf_table(n: int):
    spf = np.zeros(n + 1, dtype=np.int64)
    spf[1] = 1
    for p in range(2, n + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def sigma_it_sieve(M: int, t: float):
    """eta_t(m) = m^{-it} sigma_{2it}(m) for all m <= M (real array)."""
    spf = _spf_table(M)
    out = np.zeros(M + 1, dtype=complex)
    out[1] = 1.0
    for m in range(2, M + 1):
        p = int(spf[m])
        q = m // p
        if q % p != 0:
            out[m] = out[q] * _sigma_pp(p, 1, t)
        else:
            # strip the full p-power
            e = 1
            while q % p == 0:
                q //= p
                e += 1
            out[m] = out[q] * _sigma_pp(p, e, t)
    vals = out * np.exp(-1j * t * np.log(np.maximum(np.arange(M + 1), 1)))
    return vals.real


def eta_sq_sieve(N: int, t: float):
    """eta_t(n^2) for all n <= N (real array)."""
    spf = _spf_table(N)
    out = np.zeros(N + 1, dtype=complex)
    out[1] = 1.0
    for n in range(2, N + 1):
        p = int(spf[n])
        q = n // p
        e = 1
        while q % p == 0:
            q //= p
            e += 1
        out[n] = out[q] * _sigma_pp(p, 2 * e, t)
    n_arr = np.maximum(np.arange(N + 1), 1)
    vals = out * np.exp(-2j * t * np.log(n_arr))
    return vals.real


@lru_cache(maxsize=None)
def _sigma_pp(p: int, e: int, t: float) -> complex:
    """sigma_{2it}(p^e) = (p^{2it(e+1)} - 1)/(p^{2it} - 1)."""
    z = np.exp(2j * t * math.log(p))
    if abs(z - 1) < 1e-9:
        return complex(e + 1)
    return complex((z ** (e + 1) - 1) / (z - 1))


# ---------------------------------------------------------------------------
# certified tails
# ---------------------------------------------------------------------------

def dirichlet_tau_partial(x: int) -> int:
    """Exact D(x) = sum_{m<=x} tau(m) via the hyperbola method."""
    if x < 1:
        return 0
    r = math.isqrt(x)
    return 2 * sum(x // d for d in range(1, r + 1)) - r * r


def _eisenstein_tail_bound(kind: str, t: float, contour: ContourSpec, M: int,
                           squares: bool) -> float:
    """Certified bound for sum_{m>M} |coef(m)| m^{-1/2} |F(m,t)|.

    coef bound: tau(m) (eta_t) or tau(m)^2 >= tau(m^2) (eta_t(n^2)), with
    sum_{n<=x} tau(n)^2 <= x (log x + 1)^3. F-bound: min over the sigma grid
    of the shifted-contour certificate.
    """
    build = _w_kernel if kind == "W" else _v_kernel
    height = contour.height_for(t)
    sig_bounds = []
    for sg in _SIGMA_GRID:
        ker = build(t, sg, height, contour.variant, 1.0)
        sig_bounds.append((sg, ker.log_abs_bound()))
    total = 0.0
    B = M
    for _ in range(200):
        lo, hi = B, 2 * B
        if squares:
            cnt = hi * (math.log(hi) + 1) ** 3 - lo * (math.log(lo) + 1) ** 3
            cnt = max(cnt, 0.0) + (math.log(hi) + 1) ** 3
        else:
            cnt = dirichlet_tau_partial(hi) - dirichlet_tau_partial(lo)
        logF = min(lb - sg * math.log(lo) for sg, lb in sig_bounds)
        block = cnt * lo ** -0.5 * math.exp(logF)
        total += block
        if block < 1e-18 * max(total, 1e-300) or block < 1e-22:
            break
        B = hi
    return total


def eisenstein_m_max(kind: str, t: float, contour: ContourSpec,
                     tail_target: float) -> tuple[int, float]:
    """Smallest dyadic M with certified tail <= tail_target, plus the bound."""
    M = max(64, int(t))
    for _ in range(40):
        b = _eisenstein_tail_bound(kind, t, contour, M, squares=(kind == "V"))
        if b <= tail_target:
            return M, b
        M *= 2
    raise TruncationBudgetError(
        f"cannot certify tail <= {tail_target} for {kind} at t={t}")


# ---------------------------------------------------------------------------
# Eisenstein AFE central values (Lemmas 2.1 / 2.2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AfeValue:
    value: float
    tail_bound: float
    m_max: int


def _eisenstein_afe(kind: str, t: float, contour: ContourSpec,
                    tail_target: float) -> AfeValue:
    M, tail = eisenstein_m_max(kind, t, contour, tail_target)
    build = _w_kernel if kind == "W" else _v_kernel
    ker = build(t, contour.sigma, contour.height_for(t), contour.variant,
                max(1.0, math.log(M + 1)))
    m = np.arange(1, M + 1, dtype=float)
    # kernel eval via spline on a log grid (the exact kernel is smooth in log m)
    from scipy.interpolate import CubicSpline
    grid = np.exp(np.linspace(0.0, math.log(M + 1.0), 4096))
    spl = CubicSpline(np.log(grid), ker.eval(grid))
    F = spl(np.log(m))
    if kind == "W":
        coeff = sigma_it_sieve(M, t)[1:]
    else:
        coeff = eta_sq_sieve(M, t)[1:]
    val = 2.0 * float(np.sum(coeff * m ** -0.5 * F))
    return AfeValue(val, tail, M)


def l_half_eisenstein_afe(t: float, window: SpectralWindow | None = None,
                          contour: ContourSpec | None = None,
                          tail_target: float = 1e-9) -> float:
    """|zeta(1/2+it)|^2 = 2 sum_m eta_t(m) m^{-1/2} W(m,t), truncated with a
    certified tail."""
    if t < 10:
        raise ValueError("requires t >= 10")
    contour = contour or ContourSpec()
    return _eisenstein_afe("W", t, contour, tail_target).value


def l_half_sym2_eisenstein_afe(t: float, window: SpectralWindow | None = None,
                               contour: ContourSpec | None = None,
                               tail_target: float = 1e-9) -> float:
    """zeta(1/2)|zeta(1/2+2it)|^2 = 2 sum_n eta_t(n^2) n^{-1/2} V(n,t);
    signed (zeta(1/2) < 0)."""
    if t < 10:
        raise ValueError("requires t >= 10")
    contour = contour or ContourSpec()
    return _eisenstein_afe("V", t, contour, tail_target).value


def afe_consistency_report(t: float, contour: ContourSpec | None = None) -> dict:
    """Route-equality record: AFE vs direct Euler-Maclaurin values at t."""
    contour = contour or ContourSpec()
    w_afe = _eisenstein_afe("W", t, contour, 1e-9)
    v_afe = _eisenstein_afe("V", t, contour, 1e-9)
    direct_w = central_zeta(t)
    direct_v = zeta_half() * central_zeta(2 * t)
    return {
        "t": t,
        "gl2": {"afe": w_afe.value, "direct": direct_w,
                "rel_err": abs(w_afe.value - direct_w) / abs(direct_w),
                "tail_bound": w_afe.tail_bound, "m_max": w_afe.m_max},
        "sym2": {"afe": v_afe.value, "direct": direct_v,
                 "rel_err": abs(v_afe.value - direct_v) / abs(direct_v),
                 "tail_bound": v_afe.tail_bound, "m_max": v_afe.m_max},
    }


# ---------------------------------------------------------------------------
# holomorphic weights
# ---------------------------------------------------------------------------

MOLLIFIERS = ("gauss", "gamma-sharp")

# S6 constant C, both printed forms (they differ by log 2; candidate 2 is the
# one consistent with a4 and with the direct derivation -- reported, not
# silently chosen).
C_CANDIDATE_1 = (2 * EULER - 1.5 * LOGPI
                 + float(-mp.euler + mp.pi / 2 - 3 * mp.log(2)) / 2 - 2 * LOG2)
C_CANDIDATE_2 = 1.5 * EULER - 1.5 * LOGPI - 2.5 * LOG2 + float(mp.pi) / 4


def u_weight_holo(m: float, weight: int, mollifier: str = "gauss") -> float:
    """AFE weight for L(1/2,f): U_k(m), kernel Gamma(y+2k)/Gamma(2k) (2pi m)^{-y}/y.

    gamma-sharp (G=1) collapses to the regularized incomplete gamma
    Q_{2k}(2 pi m), i.e. the classical Hecke-integral tail weight.
    """
    k2 = weight // 2
    if mollifier == "gamma-sharp":
        return float(sps.gammaincc(k2, 2 * math.pi * m))
    ker = _u_kernel_gauss(weight, max(1.0, math.log(m + 1)))
    return float(ker.eval(float(m)))


@lru_cache(maxsize=256)
def _u_kernel_gauss(weight: int, max_log_x: float, sigma: float = 0.5) -> ContourKernel:
    k2 = weight // 2
    vmax = math.sqrt(40.0 + sigma * sigma) + 4.0
    s, w = _contour_nodes(sigma, vmax, max_log_x,
                          freq=abs(math.log(max(k2, 2) / (2 * math.pi))) + 1.0)
    log_f = (sps.loggamma(s + k2) - sps.loggamma(k2)
             - s * math.log(2 * math.pi) + s * s - np.log(s))
    return ContourKernel(s, log_f, w)


@lru_cache(maxsize=256)
def _v_sym2_kernel_holo(weight: int, mollifier: str, max_log_x: float,
                        sigma: float = 0.5) -> ContourKernel:
    """Kernel for V_{weight}(n) = 2*(1/2pi i) int R(u) zeta(1+2u) n^{-u} G(u) du/u,
    R(u) the sym^2 gamma ratio Gamma_R(3/2+u)Gamma_R(u+w-1/2)Gamma_R(u+w+1/2)
    over its value at u = 0."""
    w4k = weight
    if mollifier == "gauss":
        vmax = math.sqrt(40.0 + sigma * sigma) + 4.0
    else:
        vmax = (4 / math.pi) * (36.0 + 2 * math.log(1 + w4k)) + 8.0
    s, w = _contour_nodes(sigma, vmax, max_log_x,
                          freq=math.log(1 + w4k) + 1.0)
    log_ratio = (_loggamma_r_vec(1.5 + s) - _loggamma_r_vec(1.5)
                 + _loggamma_r_vec(s + w4k - 0.5) - _loggamma_r_vec(w4k - 0.5)
                 + _loggamma_r_vec(s + w4k + 0.5) - _loggamma_r_vec(w4k + 0.5))
    zvals = np.array([complex(zeta_mp(complex(1 + 2 * sj))) for sj in s])
    log_f = log_ratio + np.log(zvals) - np.log(s) + math.log(2.0)
    if mollifier == "gauss":
        log_f = log_f + s * s
    return ContourKernel(s, log_f, w)


def v_weight_sym2_holo(n: float, weight: int, mollifier: str = "gauss") -> float:
    ker = _v_sym2_kernel_holo(weight, mollifier, max(1.0, math.log(n + 1)))
    return float(ker.eval(float(n)))


def _holo_tail_bound(kernel_builder, M: int, half_power: bool, tau_sq: bool) -> float:
    """Certified sum_{m>M} coef(m) m^{-1/2 or 0} |F(m)| via the sigma grid."""
    sig_bounds = []
    for sg in (1.0, 2.0, 4.0, 6.0, 9.0, 13.0):
        ker = kernel_builder(sg)
        sig_bounds.append((sg, ker.log_abs_bound()))
    total = 0.0
    B = M
    for _ in range(200):
        lo, hi = B, 2 * B
        if tau_sq:
            cnt = hi * (math.log(hi) + 1) ** 3 - lo * (math.log(lo) + 1) ** 3 \
                + (math.log(hi) + 1) ** 3
        else:
            cnt = dirichlet_tau_partial(hi) - dirichlet_tau_partial(lo)
        logF = min(lb - sg * math.log(lo) for sg, lb in sig_bounds)
        block = cnt * (lo ** -0.5 if half_power else 1.0) * math.exp(logF)
        total += block
        if block < 1e-18 * max(total, 1e-300) or block < 1e-22:
            break
        B = hi
    return total


@dataclass(frozen=True)
class LValue:
    value: float
    tail_bound: float
    n_used: int
    sign_forced: bool = False

    def __float__(self):
        return self.value


def holo_u_m_max(weight: int, mollifier: str, tail_target: float) -> tuple[int, float]:
    """Certified truncation for sum_m |lambda(m)| m^{-1/2} U(m)."""
    if mollifier == "gamma-sharp":
        # Q_{2k}(2 pi m) <= e^{-2 pi m} (2 pi m)^{2k-1}/Gamma(2k) * 2 for 2pi m >= 4k
        k2 = weight // 2
        M = max(2, weight // 4)
        for _ in range(60):
            x = 2 * math.pi * (M + 1)
            logq = -x + (k2 - 1) * math.log(x) - float(sps.gammaln(k2)) + math.log(2.0)
            # geometric-ish decay beyond: bound the tail by 2 * first term * tau factor
            bound = 4 * tau(M + 1) * math.exp(logq)
            if bound <= tail_target and x > 2 * k2:
                return M, bound
            M += 1
        raise TruncationBudgetError("cannot certify gamma-sharp U tail")
    builder = lambda sg: _u_kernel_gauss(weight, 1.0, sigma=sg)
    M = max(32, weight)
    for _ in range(40):
        b = _holo_tail_bound(builder, M, half_power=True, tau_sq=False)
        if b <= tail_target:
            return M, b
        M *= 2
    raise TruncationBudgetError("cannot certify gauss U tail")


def holo_v_n_max(weight: int, mollifier: str, tail_target: float) -> tuple[int, float]:
    builder = lambda sg: _v_sym2_kernel_holo(weight, mollifier, 1.0, sigma=sg)
    M = max(8, weight // 2)
    for _ in range(40):
        b = _holo_tail_bound(builder, M, half_power=True, tau_sq=True)
        if b <= tail_target:
            return M, b
        M *= 2
    raise TruncationBudgetError("cannot certify sym2 V tail")


def l_half_holo(form, mollifier: str = "gauss", tail_target: float = 1e-10) -> LValue:
    """L(1/2,f) = 2 sum lambda(n) n^{-1/2} U_k(n); 0 (sign-forced) for 4 | weight
    failing, i.e. weight == 2 mod 4."""
    if form.weight % 4 != 0:
        return LValue(0.0, 0.0, 0, sign_forced=True)
    M, tail = holo_u_m_max(form.weight, mollifier, tail_target)
    if M > form.n_max:
        raise TruncationBudgetError(
            f"form n_max={form.n_max} < certified truncation {M}")
    n = np.arange(1, M + 1, dtype=float)
    lam = np.array([form.lam(i) for i in range(1, M + 1)])
    if mollifier == "gamma-sharp":
        U = sps.gammaincc(form.weight // 2, 2 * math.pi * n)
    else:
        ker = _u_kernel_gauss(form.weight, math.log(M + 1.0))
        U = ker.eval(n)
    return LValue(2.0 * float(np.sum(lam * n ** -0.5 * U)), tail, M)


def l_half_sym2_holo(form, variant: str = "exact-contour",
                     mollifier: str = "gauss", tail_target: float = 1e-10,
                     c_constant: float | None = None) -> LValue:
    """L(1/2, sym^2 f): exact-contour variant, or the paper-asymptotic
    variant V_{4k}(n) ~ log(4k/n) + C on the same certified range."""
    N, tail = holo_v_n_max(form.weight, mollifier, tail_target)
    n = np.arange(1, N + 1, dtype=float)
    lam_sq = np.array([form.lam_extended(i * i) for i in range(1, N + 1)])
    if variant == "exact-contour":
        ker = _v_sym2_kernel_holo(form.weight, mollifier, math.log(N + 1.0))
        V = ker.eval(n)
    elif variant == "paper-asymptotic":
        C = C_CANDIDATE_2 if c_constant is None else c_constant
        V = np.log(form.weight / n) + C
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return LValue(float(np.sum(lam_sq * n ** -0.5 * V)), tail, N)


# ---------------------------------------------------------------------------
# L(1, sym^2 f) and the harmonic weight
# ---------------------------------------------------------------------------

@lru_cache(maxsize=128)
def _l_one_kernels(weight: int, max_log_x: float):
    """K1(n) = (1/2pi i) int gamma(1+u) n^{-u} du/u  (sigma = 1/2) and
    K0(n) = (1/2pi i) int gamma(v) n^{-v} dv/v (sigma = 2), gamma(s) the
    completed sym^2 factor Gamma_R(s+1)Gamma_R(s+w-1)Gamma_R(s+w).
    No extra mollifier: the gamma decay is the smoothing."""
    w = weight

    def log_gamma_factor(s):
        return (_loggamma_r_vec(s + 1) + _loggamma_r_vec(s + w - 1)
                + _loggamma_r_vec(s + w))

    vmax = (4 / math.pi) * (40.0 + 2 * math.log(1 + w)) + 10.0
    freq = 1.5 * math.log(1 + w) + 1.0
    s1, w1 = _contour_nodes(0.5, vmax, max_log_x, freq=freq)
    k1 = ContourKernel(s1, log_gamma_factor(1 + s1) - np.log(s1), w1)
    s0, w0 = _contour_nodes(2.0, vmax, max_log_x, freq=freq)
    k0 = ContourKernel(s0, log_gamma_factor(s0) - np.log(s0), w0)
    return k1, k0


def _sym2_dirichlet_coeffs(form, N: int):
    """c(n) of L(s,sym^2 f) = zeta(2s) sum lambda(m^2) m^{-s}, n <= N."""
    c = np.zeros(N + 1)
    for d in range(1, math.isqrt(N) + 1):
        step = d * d
        for m in range(1, N // step + 1):
            c[step * m] += form.lam_extended(m * m)
    return c


def l_one_sym2(form, n_max: int | None = None, tail_target: float = 1e-11) -> LValue:
    """L(1, sym^2 f) by the symmetric smoothed identity
    Lambda(1) = sum c(n)/n K1(n) + sum c(n) K0(n), L = Lambda/gamma(1)."""
    w = form.weight
    k1s, k0s = [], []
    for sg in (1.0, 2.0, 4.0, 6.0, 9.0):
        # shifted-bound kernels for the tail certificate
        k1, k0 = _l_one_kernels_sigma(w, sg)
        k1s.append((sg, k1.log_abs_bound()))
        k0s.append((sg + 1.5, k0.log_abs_bound()))
    log_gamma1 = float(np.real(_loggamma_r_vec(2.0) + _loggamma_r_vec(w * 1.0)
                               + _loggamma_r_vec(w + 1.0)))
    if n_max is None:
        N = 16
        for _ in range(30):
            b = _l_one_tail(k1s, k0s, N, log_gamma1)
            if b <= tail_target:
                break
            N *= 2
        else:
            raise TruncationBudgetError("cannot certify l_one_sym2 tail")
        tail = b
    else:
        N = n_max
        tail = _l_one_tail(k1s, k0s, N, log_gamma1)
    k1, k0 = _l_one_kernels(w, math.log(N + 1.0))
    c = _sym2_dirichlet_coeffs(form, N)[1:]
    n = np.arange(1, N + 1, dtype=float)
    lam1 = float(np.sum(c / n * k1.eval(n)) + np.sum(c * k0.eval(n)))
    return LValue(lam1 * math.exp(-log_gamma1), tail, N)


@lru_cache(maxsize=256)
def _l_one_kernels_sigma(weight: int, sigma: float):
    w = weight

    def log_gamma_factor(s):
        return (_loggamma_r_vec(s + 1) + _loggamma_r_vec(s + w - 1)
                + _loggamma_r_vec(s + w))

    vmax = (4 / math.pi) * (40.0 + 2 * math.log(1 + w)) + 10.0
    freq = 1.5 * math.log(1 + w) + 1.0
    s1, w1 = _contour_nodes(sigma, vmax, 1.0, freq=freq)
    k1 = ContourKernel(s1, log_gamma_factor(1 + s1) - np.log(s1), w1)
    s0, w0 = _contour_nodes(sigma + 1.5, vmax, 1.0, freq=freq)
    k0 = ContourKernel(s0, log_gamma_factor(s0) - np.log(s0), w0)
    return k1, k0


def _l_one_tail(k1_bounds, k0_bounds, N, log_gamma1):
    total = 0.0
    B = N
    for _ in range(120):
        lo, hi = B, 2 * B
        cnt = hi * (math.log(hi) + 1) ** 3 - lo * (math.log(lo) + 1) ** 3 \
            + (math.log(hi) + 1) ** 3  # sum tau_3(n)-ish bound via tau(n)^2
        logF1 = min(lb - sg * math.log(lo) for sg, lb in k1_bounds)
        logF0 = min(lb - sg * math.log(lo) for sg, lb in k0_bounds)
        block = cnt * (math.exp(logF1 - log_gamma1) / lo + math.exp(logF0 - log_gamma1))
        total += block
        if block < 1e-18 * max(total, 1e-300) or block < 1e-24:
            break
        B = hi
    return total


def harmonic_weight(form, tail_target: float = 1e-11) -> float:
    """w_f = 2 pi^2 / ((weight-1) L(1, sym^2 f)); positive."""
    l1 = l_one_sym2(form, tail_target=tail_target)
    return 2 * math.pi ** 2 / ((form.weight - 1) * l1.value)
