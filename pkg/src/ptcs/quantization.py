"""Coherent-state quantization: resolution of identity, the symbol -> operator
map, and lower (covariant) symbols.

The momentum integral of the quantization map is always carried out
analytically against the plane-wave factor exp(i p (x - x')), which turns
p^k symbols (k <= 2) into point-evaluation / derivative kernels.  Only
position-side quadratures remain:

* degree 0:  F(x) = sin^{2nu+2}(t_x) * int u(q) N^2(q) exp(2 W(q) x) dq
  (a multiplier),
* degree 1:  kernel  -i g_q(x) d/dx [g_q(x) psi(x)]  (Hermitian by the
  symmetric placement of g_q = exp(W(q) x) sin^{nu+1}),
* degree 2:  kernel  -g_q(x) d^2/dx^2 [g_q(x) psi(x)].

The label-position integrand, once the normalization is combined with the
exponential in log space, is smooth and bounded on (0, pi) with finite
endpoint limits, so plain node-doubling Gauss-Legendre converges; per-label
t-quadratures switch to a wall-refined composite rule when the profile
concentrates (|W(q)| large).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coherent import cs_coefficients, log_inv_norm_sq_internal
from .eigensystem import DEFAULT_NMAX, eigen_basis
from .specfun import gauss_legendre

__all__ = [
    "ClassicalSymbol",
    "QuantizedOperator",
    "builtin_symbol",
    "identity_weight",
    "identity_matrix",
    "quantize",
    "quantize_position",
    "known_operator",
    "lower_symbol",
]


@dataclass(frozen=True)
class ClassicalSymbol:
    """A phase-space symbol u0(q) + u1(q) p + u2(q) p^2 (dimensionless units).

    Each u_k is a callable of the position t_q in (0, pi), or None.
    """

    u0: Callable | None = None
    u1: Callable | None = None
    u2: Callable | None = None
    name: str = "custom"

    def __post_init__(self):
        if self.u0 is None and self.u1 is None and self.u2 is None:
            raise ValueError("symbol has no terms")

    @property
    def p_degree(self) -> int:
        if self.u2 is not None:
            return 2
        return 1 if self.u1 is not None else 0


@dataclass(frozen=True)
class QuantizedOperator:
    """Result of quantization: a multiplier on (0, pi) or an eigenbasis matrix.

    ``properties`` carries boundedness/self-adjointness tags copied from the
    classification of the corresponding rows; no extension construction is
    performed here.
    """

    kind: str                      # "multiplier" | "matrix"
    nu: float
    source: str
    multiplier: Callable | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)
    properties: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("multiplier", "matrix"):
            raise ValueError(f"unknown operator kind {self.kind!r}")


def builtin_symbol(name: str, nu: float) -> ClassicalSymbol:
    """Named built-in classical symbols (dimensionless units)."""
    if name == "position":
        return ClassicalSymbol(u0=lambda q: q, name="position")
    if name == "superpotential":
        return ClassicalSymbol(u0=lambda q: -(nu + 1.0) / np.tan(q), name="superpotential")
    if name == "inverse_sin_squared":
        return ClassicalSymbol(u0=lambda q: 1.0 / np.sin(q) ** 2, name="inverse_sin_squared")
    if name == "momentum":
        return ClassicalSymbol(u1=lambda q: np.ones_like(q), name="momentum")
    if name == "kinetic":
        return ClassicalSymbol(u2=lambda q: np.ones_like(q), name="kinetic")
    if name == "classical_hamiltonian":
        c = (2.0 * nu - 1.0) / (2.0 * nu + 3.0) * (nu + 1.0) ** 2
        return ClassicalSymbol(u2=lambda q: np.ones_like(q),
                               u0=lambda q: c / np.sin(q) ** 2,
                               name="classical_hamiltonian")
    raise ValueError(f"unknown built-in symbol {name!r}")


def _position_integral(nu: float, t, u=None, tol: float = 1e-9,
                       n0: int = 64, max_nodes: int = 4096) -> np.ndarray:
    """int_0^pi u(q) N^2(q) exp(2 W(q) t) dq  for each t, by node doubling."""
    t = np.atleast_1d(np.asarray(t, dtype=float))

    def estimate(n):
        rule = gauss_legendre(n, 0.0, math.pi)
        q = rule.nodes
        a = -(nu + 1.0) / np.tan(q)
        log_nsq = -log_inv_norm_sq_internal(nu, a)
        kernel = np.exp(2.0 * np.outer(t, a) + log_nsq)   # (T, Q)
        weights = rule.weights if u is None else rule.weights * u(q)
        return kernel @ weights

    n = n0
    prev = estimate(n)
    while n < max_nodes:
        n *= 2
        cur = estimate(n)
        if np.all(np.abs(cur - prev) <= tol * np.maximum(np.abs(cur), 1.0)):
            return cur
        prev = cur
    raise RuntimeError("position-side quadrature did not converge")


def identity_weight(nu: float, t, tol: float = 1e-9):
    """g(t) = sin^{2nu+2}(t) * int_0^pi N^2(q) exp(2 W(q) t) dq.

    The momentum integral of the rank-one projector family collapses to a
    point-evaluation kernel, so the resolution of identity is equivalent to
    g being identically 1 on (0, pi).
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0) or np.any(t_arr >= math.pi):
        raise ValueError("identity weight needs interior t in (0, pi)")
    g = np.sin(t_arr) ** (2.0 * nu + 2.0) * _position_integral(nu, t_arr, tol=tol)
    return float(g[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else g


def _wall_rule(a: float, n_bulk: int, n_wall: int):
    """Composite t-rule refined near the wall the profile concentrates at."""
    c = min(0.5 * math.pi, 30.0 / (2.0 * abs(a)))
    if a > 0:
        r1 = gauss_legendre(n_bulk, 0.0, math.pi - c)
        r2 = gauss_legendre(n_wall, math.pi - c, math.pi)
    else:
        r1 = gauss_legendre(n_wall, 0.0, c)
        r2 = gauss_legendre(n_bulk, c, math.pi)
    return np.concatenate([r1.nodes, r2.nodes]), np.concatenate([r1.weights, r2.weights])


def _matrix_from_kernel(nu: float, nmax: int, u0=None, u1=None, u2=None,
                        tol: float = 1e-10, nq0: int = 64,
                        max_q_nodes: int = 2048, nt: int = 400) -> np.ndarray:
    """Assemble the eigenbasis matrix of the quantization of
    u0(q) + u1(q) p + u2(q) p^2 (dimensionless units)."""
    basis = eigen_basis(float(nu), int(nmax))
    order = 2 if u2 is not None else 1

    def columns_at(nq):
        qrule = gauss_legendre(nq, 0.0, math.pi)
        total = np.zeros((nmax + 1, nmax + 1), dtype=complex)
        for q, wq in zip(qrule.nodes, qrule.weights):
            a = -(nu + 1.0) / math.tan(q)
            kappa = max(a, 0.0) * math.pi
            log_mass = float(log_inv_norm_sq_internal(nu, a)[0]) - 2.0 * kappa
            inv_mass = math.exp(-log_mass)
            if abs(a) > 25.0:
                tn, tw = _wall_rule(a, nt, nt)
            else:
                rule = gauss_legendre(nt, 0.0, math.pi)
                tn, tw = rule.nodes, rule.weights
            s = np.sin(tn)
            tables = basis.values_and_derivs(tn, order=order)
            phi, dphi = tables[0], tables[1]
            ghat2 = inv_mass * np.exp(2.0 * (a * tn - kappa)) * s ** (2.0 * nu + 2.0)
            left = phi * (tw * ghat2)
            lgd = a + (nu + 1.0) * np.cos(tn) / s
            if u0 is not None:
                total += (wq * u0(q)) * (left @ phi.T)
            if u1 is not None:
                total += (-1j * wq * u1(q)) * (left @ (lgd * phi + dphi).T)
            if u2 is not None:
                d2phi = tables[2]
                inner = (lgd**2 - (nu + 1.0) / s**2) * phi + 2.0 * lgd * dphi + d2phi
                total += (-wq * u2(q)) * (left @ inner.T)
        return total

    nq = nq0
    prev = columns_at(nq)
    scale = max(1.0, float(np.max(np.abs(prev))))
    while nq < max_q_nodes:
        nq *= 2
        cur = columns_at(nq)
        if np.max(np.abs(cur - prev)) <= tol * scale:
            return cur
        prev = cur
        scale = max(1.0, float(np.max(np.abs(cur))))
    raise RuntimeError("matrix assembly did not converge in the label quadrature")


def identity_matrix(nu: float, nmax: int, tol: float = 1e-9) -> np.ndarray:
    """Matrix form of the resolution of identity: should equal delta_mn."""
    mat = _matrix_from_kernel(nu, nmax, u0=lambda q: 1.0, tol=tol)
    return mat.real


def quantize(symbol: ClassicalSymbol, nu: float, nmax: int = DEFAULT_NMAX,
             tol: float = 1e-10, as_matrix: bool = False) -> QuantizedOperator:
    """Quantization map: classical symbol -> multiplier or eigenbasis matrix.

    Symbols at most quadratic in p are supported; p-independent symbols
    reduce to multiplication operators unless ``as_matrix`` forces the
    eigenbasis-matrix representation (which stays well conditioned even
    though the multiplier itself diverges at the walls).
    """
    if symbol.p_degree == 0 and not as_matrix:
        u0 = symbol.u0

        def multiplier(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            vals = np.sin(t) ** (2.0 * nu + 2.0) * _position_integral(nu, t, u=u0, tol=tol)
            return vals
        return QuantizedOperator(kind="multiplier", nu=float(nu),
                                 source=symbol.name, multiplier=multiplier)
    scalarize = lambda f: (None if f is None else (lambda q: float(np.asarray(f(np.asarray(q))))))
    mat = _matrix_from_kernel(nu, nmax, u0=scalarize(symbol.u0),
                              u1=scalarize(symbol.u1), u2=scalarize(symbol.u2),
                              tol=tol)
    return QuantizedOperator(kind="matrix", nu=float(nu), source=symbol.name,
                             matrix=mat)


def quantize_position(nu: float, tol: float = 1e-10) -> QuantizedOperator:
    """Multiplier F with F(t_x) = sin^{2nu+2} int q N^2(q) exp(2W(q)x) dq.

    Satisfies F(pi/2) = pi/2 and F(t) + F(pi - t) = pi (midpoint symmetry).
    """
    return quantize(builtin_symbol("position", nu), nu, tol=tol)


def known_operator(name: str, nu: float, nmax: int = DEFAULT_NMAX) -> QuantizedOperator:
    """Reference operators whose lower symbols have closed forms.

    ``position_op``/``superpotential_op``/``inverse_sin_squared_op`` are
    multipliers; ``momentum_op`` and ``kinetic_op`` are eigenbasis matrices
    assembled from analytic derivatives (units pi*hbar/L and E0).
    """
    if name == "superpotential_op":
        return QuantizedOperator(kind="multiplier", nu=nu, source=name,
                                 multiplier=lambda t: -(nu + 1.0) / np.tan(t),
                                 properties=("unbounded", "self-adjoint"))
    if name == "inverse_sin_squared_op":
        return QuantizedOperator(kind="multiplier", nu=nu, source=name,
                                 multiplier=lambda t: 1.0 / np.sin(t) ** 2,
                                 properties=("unbounded", "self-adjoint"))
    if name == "position_op":
        return QuantizedOperator(kind="multiplier", nu=nu, source=name,
                                 multiplier=lambda t: np.asarray(t, dtype=float),
                                 properties=("bounded", "self-adjoint"))
    basis = eigen_basis(float(nu), int(nmax))
    rule = gauss_legendre(800, 0.0, math.pi)
    phi, dphi = basis.values_and_derivs(rule.nodes, order=1)
    if name == "momentum_op":
        mat = -1j * (phi * rule.weights) @ dphi.T
        return QuantizedOperator(kind="matrix", nu=nu, source=name, matrix=mat,
                                 properties=("unbounded", "symmetric"))
    if name == "kinetic_op":
        # <phi_m|P^2|phi_n> = int phi_m' phi_n' (by parts, Dirichlet)
        mat = ((dphi * rule.weights) @ dphi.T).astype(complex)
        return QuantizedOperator(kind="matrix", nu=nu, source=name, matrix=mat,
                                 properties=("semi-bounded",))
    raise ValueError(f"unknown operator {name!r}")


def lower_symbol(op: QuantizedOperator, nu: float, tq: float, pt: float,
                 nmax: int = DEFAULT_NMAX, rtol: float = 1e-11):
    """Expectation value of ``op`` in the coherent state at (q, p).

    Multiplier kinds integrate against |eta|^2 by node-doubling quadrature,
    as do the differential reference operators (whose action on eta is
    analytic: eta' = eta * (a + ip + (nu+1)cot t)); generic matrix kinds
    contract the coefficient vector (truncation mass is the caller-visible
    error bar on that route).
    """
    if op.kind == "multiplier" or op.source in ("momentum_op", "kinetic_op"):
        from .coherent import cs_wavefunction_internal

        a = -(nu + 1.0) / math.tan(tq)

        def estimate(n):
            rule = gauss_legendre(n, 0.0, math.pi)
            dens = np.abs(cs_wavefunction_internal(nu, tq, pt, rule.nodes)) ** 2
            if op.kind == "multiplier":
                f = np.asarray(op.multiplier(rule.nodes))
            elif op.source == "momentum_op":
                # Re(conj(eta) * (-i eta')) = pt * |eta|^2
                f = pt
            else:
                # |eta'|^2 = |eta|^2 * (pt^2 + (a + (nu+1)cot t)^2)
                f = pt**2 + (a + (nu + 1.0) / np.tan(rule.nodes)) ** 2
            return float(np.dot(rule.weights, dens * f))

        n = 256
        prev = estimate(n)
        while n < 16384:
            n *= 2
            cur = estimate(n)
            if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
                return cur
            prev = cur
        raise RuntimeError("lower-symbol quadrature did not converge")
    size = op.matrix.shape[0] - 1
    coeffs = cs_coefficients(nu, tq, pt, nmax=size).coeffs
    value = complex(np.conj(coeffs) @ op.matrix @ coeffs)
    return value.real if abs(value.imag) < 1e-9 * max(1.0, abs(value)) else value
