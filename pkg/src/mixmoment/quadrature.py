"""Float-precision quadrature with error estimates.

Two schemes behind one QuadratureSpec:

* adaptive-gauss: per-panel embedded Gauss-Legendre pair (order n vs 2n),
  bisecting the worst panels until the summed error estimate certifies
  max(abs_tol, rel_tol*|value|).
* double-exponential: tanh-sinh level doubling on a finite interval, error
  estimated from the last level increment.

Every result carries the error estimate; failing to certify raises
NonConvergenceError. Panel subdivision order is deterministic (worst-first
with index tiebreak), so identical inputs give bit-identical sums.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonConvergenceError


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "adaptive-gauss"  # or "double-exponential"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_refinements: int = 14
    truncation_radius: float = 8.0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")
        if self.truncation_radius <= 0:
            raise ValueError("truncation_radius must be positive")
        if self.scheme not in ("adaptive-gauss", "double-exponential"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    def tolerance_for(self, value: complex) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float
    nodes: int

    @property
    def real(self) -> float:
        return float(np.real(self.value))


DEFAULT_QUAD = QuadratureSpec()

_GAUSS_ORDER = 16


@lru_cache(maxsize=None)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_pair(f, a: float, b: float, vectorized: bool):
    """(coarse, fine) Gauss estimates on [a, b]."""
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    vals = []
    for order in (_GAUSS_ORDER, 2 * _GAUSS_ORDER):
        x, w = _leggauss(order)
        nodes = mid + half * x
        if vectorized:
            fx = np.asarray(f(nodes))
        else:
            fx = np.array([f(t) for t in nodes])
        vals.append(half * np.sum(w * fx))
    return vals[0], vals[1]


def integrate(f, a: float, b: float, spec: QuadratureSpec = DEFAULT_QUAD,
              vectorized: bool = False) -> QuadratureResult:
    """Integrate f over [a, b] per the spec'd scheme."""
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    if spec.scheme == "double-exponential":
        return _tanh_sinh(f, a, b, spec, vectorized)
    return _adaptive_gauss(f, a, b, spec, vectorized)


def _adaptive_gauss(f, a, b, spec, vectorized) -> QuadratureResult:
    coarse, fine = _panel_pair(f, a, b, vectorized)
    # heap entries: (-err, seq, a, b, fine_value)
    heap = [(-abs(fine - coarse), 0, a, b, fine)]
    seq = 1
    nodes = 3 * _GAUSS_ORDER
    for _ in range(spec.max_refinements * 64):
        total = sum(e[4] for e in heap)
        err = sum(-e[0] for e in heap)
        if err <= spec.tolerance_for(total):
            return QuadratureResult(_maybe_real(total), float(err), nodes)
        neg_err, _, pa, pb, _ = heapq.heappop(heap)
        if pb - pa < 1e-14 * max(1.0, abs(b - a)):
            # panel cannot shrink further; accept its estimate
            heapq.heappush(heap, (0.0, seq, pa, pb, -neg_err * 0))
            seq += 1
            continue
        pm = 0.5 * (pa + pb)
        for (qa, qb) in ((pa, pm), (pm, pb)):
            c2, f2 = _panel_pair(f, qa, qb, vectorized)
            heapq.heappush(heap, (-abs(f2 - c2), seq, qa, qb, f2))
            seq += 1
            nodes += 3 * _GAUSS_ORDER
    total = sum(e[4] for e in heap)
    err = sum(-e[0] for e in heap)
    if err <= spec.tolerance_for(total):
        return QuadratureResult(_maybe_real(total), float(err), nodes)
    raise NonConvergenceError(
        f"adaptive-gauss failed on [{a}, {b}]: err={err:.3e} vs tol={spec.tolerance_for(total):.3e}")


def _tanh_sinh(f, a, b, spec, vectorized) -> QuadratureResult:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    tmax = 3.2  # tanh(pi/2*sinh(3.2)) is 1 to ~1e-17
    value = None
    nodes = 0
    prev = None
    err = math.inf
    for level in range(2, spec.max_refinements + 2):
        n = 2 ** level
        t = np.linspace(-tmax, tmax, 2 * n + 1)
        st = np.pi / 2 * np.sinh(t)
        x = mid + half * np.tanh(st)
        w = half * (np.pi / 2) * np.cosh(t) / np.cosh(st) ** 2
        h = t[1] - t[0]
        keep = w != 0.0
        xs, ws = x[keep], w[keep]
        if vectorized:
            fx = np.asarray(f(xs))
        else:
            fx = np.array([f(v) for v in xs])
        value = h * np.sum(ws * fx)
        nodes += xs.size
        if prev is not None:
            err = abs(value - prev)
            if err <= spec.tolerance_for(value):
                return QuadratureResult(_maybe_real(value), float(err), nodes)
        prev = value
    raise NonConvergenceError(
        f"double-exponential failed on [{a}, {b}]: err={err:.3e}")


def _maybe_real(v):
    v = complex(v)
    if v.imag == 0.0:
        return v.real
    return v


def fixed_gauss(f_vec, a: float, b: float, panels: int, order: int = _GAUSS_ORDER):
    """Deterministic tensor-free panel rule for vectorized integrands.

    No error estimate; used where the caller certifies resolution analytically
    (oscillation-counted panel rules) and cross-checks by doubling.
    """
    x, w = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halves = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + halves[:, None] * x[None, :]).ravel()
    weights = (halves[:, None] * w[None, :]).ravel()
    fx = np.asarray(f_vec(nodes))
    return np.sum(weights * fx)


def gauss_nodes(a: float, b: float, panels: int, order: int = _GAUSS_ORDER):
    """Nodes and weights of the fixed panel rule (for reuse across integrands)."""
    x, w = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halves = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + halves[:, None] * x[None, :]).ravel()
    weights = (halves[:, None] * w[None, :]).ravel()
    return nodes, weights
