"""Special functions and quadrature shared by all other modules.

Gegenbauer polynomials are evaluated by the forward three-term recurrence
(stable on [-1, 1] for the lambda > 0 regime used here).  Complex log-gamma
is delegated to scipy's principal-branch implementation behind an
input-validating wrapper.  Gauss-Legendre rules are memoized by
(n, a, b) and never mutated after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import loggamma as _scipy_loggamma

__all__ = [
    "QuadratureRule",
    "gegenbauer",
    "gegenbauer_table",
    "gegenbauer_deriv",
    "log_gamma_complex",
    "gauss_legendre",
    "adaptive_quadrature",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a quadrature rule on ``interval``."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def integrate(self, f) -> complex:
        values = f(self.nodes) if callable(f) else np.asarray(f)
        return np.dot(self.weights, values)


def gegenbauer_table(nmax: int, lam: float, x) -> np.ndarray:
    """All Gegenbauer polynomials C_n^lam(x) for n = 0..nmax.

    Returns an array of shape ``(nmax + 1,) + shape(x)`` built from the
    recurrence n C_n = 2(n + lam - 1) x C_{n-1} - (n + 2 lam - 2) C_{n-2}
    seeded with C_0 = 1, C_1 = 2 lam x.
    """
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if not lam > 0:
        raise ValueError("lambda must be > 0")
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2.0 * lam * x
    for n in range(2, nmax + 1):
        out[n] = (2.0 * (n + lam - 1.0) * x * out[n - 1]
                  - (n + 2.0 * lam - 2.0) * out[n - 2]) / n
    return out


def gegenbauer(n: int, lam: float, x):
    """Gegenbauer polynomial C_n^lam(x) by forward recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    table = gegenbauer_table(n, lam, x)
    value = table[n]
    return float(value) if np.isscalar(x) or np.asarray(x).ndim == 0 else value


def gegenbauer_deriv(n: int, lam: float, x):
    """d/dx C_n^lam(x) = 2 lam C_{n-1}^{lam+1}(x)."""
    if n == 0:
        x = np.asarray(x, dtype=float)
        zero = np.zeros_like(x)
        return 0.0 if zero.ndim == 0 else zero
    return 2.0 * lam * gegenbauer(n - 1, lam + 1.0, x)


def log_gamma_complex(z) -> complex:
    """Principal-branch log Gamma(z) for Re z > 0.

    |Gamma(z)| is recoverable as exp(Re log Gamma(z)).
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise ValueError(f"log_gamma_complex: pole at z={z}")
    if z.real <= 0.0:
        raise ValueError(f"log_gamma_complex requires Re z > 0, got {z}")
    return complex(_scipy_loggamma(z))


@lru_cache(maxsize=256)
def _gauss_legendre_cached(n: int, a: float, b: float) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (b - a) * x + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes=nodes, weights=weights, interval=(a, b))


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    """Memoized n-point Gauss-Legendre rule on [a, b]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not a < b:
        raise ValueError("require a < b")
    return _gauss_legendre_cached(int(n), float(a), float(b))


def adaptive_quadrature(f, a: float, b: float, rtol: float = 1e-12,
                        n0: int = 32, max_nodes: int = 65536,
                        atol: float = 0.0):
    """Integrate f on [a, b] by node-doubling Gauss-Legendre.

    Doubles the node count until two successive estimates agree to ``rtol``
    relative (or ``atol`` absolute).  Raises RuntimeError with diagnostics
    on non-convergence.
    """
    n = n0
    rule = gauss_legendre(n, a, b)
    prev = rule.integrate(f)
    while True:
        n *= 2
        if n > max_nodes:
            raise RuntimeError(
                f"adaptive_quadrature failed to converge on [{a}, {b}] "
                f"(last={prev!r}, n={n // 2})")
        rule = gauss_legendre(n, a, b)
        cur = rule.integrate(f)
        if abs(cur - prev) <= max(rtol * abs(cur), atol):
            return cur
        prev = cur
