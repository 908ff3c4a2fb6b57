"""Eigenvalues, eigenfunctions and inner products of the confined Hamiltonian.

Everything here is analytic: the eigenfunctions are
``Z_n sin^{nu+1}(t) C_n^{nu+1}(cos t)`` (t = pi x / L) and their first and
second derivatives are obtained from the Gegenbauer derivative identity,
never from finite differences.  Internal functions use dimensionless units
(t in [0, pi], hbar = 1, 2m = 1); the few public entry points that accept
``L``/``hbar`` apply the scaling at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .specfun import gauss_legendre, gegenbauer_table

__all__ = [
    "energy",
    "norm_constant",
    "eigenfunction",
    "EigenBasis",
    "eigen_basis",
    "SpectralState",
    "overlap",
    "momentum_matrix",
    "momentum_matrix_element",
    "DEFAULT_NMAX",
    "DEFAULT_QUAD_NODES",
]

DEFAULT_NMAX = 64
DEFAULT_QUAD_NODES = 400


def energy(n: int, nu: float) -> float:
    """Dimensionless eigenvalue (n + nu + 1)^2 in units of E0."""
    if n < 0 or nu < 0:
        raise ValueError("require n >= 0 and nu >= 0")
    return float((n + nu + 1.0) ** 2)


def log_norm_internal(n, nu: float):
    """log of the normalization constant for the [0, pi] eigenfunction."""
    n = np.asarray(n, dtype=float)
    return (gammaln(nu + 1.0) + (nu + 0.5) * math.log(2.0) - 0.5 * math.log(math.pi)
            + 0.5 * (gammaln(n + 1.0) + np.log(n + nu + 1.0) - gammaln(n + 2.0 * nu + 2.0)))


def norm_constant(n: int, nu: float, L: float = math.pi) -> float:
    """Normalization constant Z_n for the well of width L.

    Computed in log space, so large n does not overflow.
    """
    if n < 0 or nu < 0:
        raise ValueError("require n >= 0 and nu >= 0")
    return float(np.exp(log_norm_internal(n, nu))) * math.sqrt(math.pi / L)


class EigenBasis:
    """Eigenfunction table phi_0..phi_nmax at fixed nu (dimensionless units).

    Provides vectorized values and analytic first/second derivatives on
    arbitrary interior grids.  Instances are immutable after construction
    and safe for concurrent read access.
    """

    def __init__(self, nu: float, nmax: int = DEFAULT_NMAX):
        if nu < 0:
            raise ValueError("nu must be >= 0")
        if nmax < 0:
            raise ValueError("nmax must be >= 0")
        self.nu = float(nu)
        self.nmax = int(nmax)
        self.energies = np.array([energy(n, nu) for n in range(nmax + 1)])
        self._lognorm = log_norm_internal(np.arange(nmax + 1), nu)
        self.norms = np.exp(self._lognorm)

    def values(self, t) -> np.ndarray:
        """phi_n(t) for all n; shape (nmax+1,) + shape(t)."""
        t = np.asarray(t, dtype=float)
        s, u = np.sin(t), np.cos(t)
        C = gegenbauer_table(self.nmax, self.nu + 1.0, u)
        shape = (-1,) + (1,) * t.ndim
        return self.norms.reshape(shape) * s ** (self.nu + 1.0) * C

    def values_and_derivs(self, t, order: int = 1):
        """(phi, phi', ...) up to ``order`` (<= 2) as stacked arrays."""
        t = np.asarray(t, dtype=float)
        nu, nmax = self.nu, self.nmax
        s, u = np.sin(t), np.cos(t)
        C = gegenbauer_table(nmax, nu + 1.0, u)
        # C'(u) = 2(nu+1) C_{n-1}^{nu+2};  C''(u) = 4(nu+1)(nu+2) C_{n-2}^{nu+3}
        Cp = np.zeros_like(C)
        if nmax >= 1:
            Cp[1:] = 2.0 * (nu + 1.0) * gegenbauer_table(nmax - 1, nu + 2.0, u)
        shape = (-1,) + (1,) * t.ndim
        Z = self.norms.reshape(shape)
        phi = Z * s ** (nu + 1.0) * C
        dphi = Z * ((nu + 1.0) * s**nu * u * C - s ** (nu + 2.0) * Cp)
        if order == 1:
            return phi, dphi
        if order != 2:
            raise ValueError("order must be 1 or 2")
        Cpp = np.zeros_like(C)
        if nmax >= 2:
            Cpp[2:] = 4.0 * (nu + 1.0) * (nu + 2.0) * gegenbauer_table(nmax - 2, nu + 3.0, u)
        d2phi = Z * (nu * (nu + 1.0) * s ** (nu - 1.0) * u**2 * C
                     - (nu + 1.0) * s ** (nu + 1.0) * C
                     - (2.0 * nu + 3.0) * s ** (nu + 1.0) * u * Cp
                     + s ** (nu + 3.0) * Cpp)
        return phi, dphi, d2phi


@lru_cache(maxsize=64)
def eigen_basis(nu: float, nmax: int = DEFAULT_NMAX) -> EigenBasis:
    """Shared read-only eigenbasis table for (nu, nmax)."""
    return EigenBasis(nu, nmax)


def eigenfunction(n: int, nu: float, x, L: float = math.pi, order: int = 0):
    """Normalized eigenfunction phi_n (or derivative) on the physical interval.

    ``order`` selects the value (0) or the first/second x-derivative (1, 2).
    For nu = 0 this reduces to sqrt(2/L) sin((n+1) pi x / L).
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > L):
        raise ValueError("x outside [0, L]")
    basis = eigen_basis(float(nu), int(n))
    t = math.pi * x / L
    scale = math.sqrt(math.pi / L)
    if order == 0:
        out = basis.values(t)[n] * scale
    else:
        res = basis.values_and_derivs(t, order=order)
        out = res[order][n] * scale * (math.pi / L) ** order
    return float(out) if out.ndim == 0 else out


@dataclass
class SpectralState:
    """A state as a finite coefficient vector over the eigenbasis at fixed nu."""

    nu: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)

    @property
    def nmax(self) -> int:
        return len(self.coeffs) - 1

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    @property
    def truncation_mass(self) -> float:
        """Probability weight lost to the basis cut, 1 - sum |c_n|^2."""
        return 1.0 - self.norm_sq


def overlap(f, g, rule=None):
    """L2 inner product <f|g> with conjugation on the first argument.

    Accepts two :class:`SpectralState` (contracted directly) or two arrays
    sampled on the nodes of ``rule``.
    """
    if isinstance(f, SpectralState) and isinstance(g, SpectralState):
        if f.nmax != g.nmax or f.nu != g.nu:
            raise ValueError("spectral states live on different bases")
        return complex(np.vdot(f.coeffs, g.coeffs))
    f = np.asarray(f)
    g = np.asarray(g)
    if rule is None:
        raise ValueError("sampled overlap requires a quadrature rule")
    if f.shape != g.shape or f.shape != rule.nodes.shape:
        raise ValueError("mismatched grids")
    return complex(np.dot(rule.weights, np.conj(f) * g))


def momentum_matrix(nu: float, nmax: int = DEFAULT_NMAX,
                    n_nodes: int = DEFAULT_QUAD_NODES) -> np.ndarray:
    """Matrix <phi_m| -i d/dt |phi_n> in units of pi*hbar/L (anti-Hermitian-free).

    Assembled by quadrature against the analytic derivative; exactly
    antisymmetric-imaginary up to quadrature error.
    """
    rule = gauss_legendre(n_nodes, 0.0, math.pi)
    basis = eigen_basis(float(nu), int(nmax))
    phi, dphi = basis.values_and_derivs(rule.nodes, order=1)
    mat = -1j * (phi * rule.weights) @ dphi.T
    return mat


def momentum_matrix_element(m: int, n: int, nu: float, L: float = math.pi,
                            hbar: float = 1.0) -> complex:
    """<phi_m|(-i hbar d/dx)|phi_n>; pure imaginary for real eigenfunctions."""
    nmax = max(m, n)
    mat = momentum_matrix(nu, nmax)
    return complex(mat[m, n] * hbar * math.pi / L)
