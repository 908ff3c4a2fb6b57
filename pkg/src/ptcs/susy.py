"""Superpotential, ladder operators, factorization and shape invariance.

The lowering/raising operators act on states carried as analytic
(value, derivative) pairs; sampled numerical differentiation is never used
because the superpotential diverges at the walls.  All residual norms are
measured on the interior window [margin, pi - margin].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .eigensystem import eigen_basis, energy
from .specfun import gauss_legendre

__all__ = [
    "superpotential",
    "superpotential_internal",
    "AnalyticState",
    "eigenstate_analytic",
    "apply_lowering",
    "apply_raising",
    "check_partner_spectrum",
    "factorization_residual",
    "intertwining_defect",
]

DEFAULT_MARGIN = 1e-6


def superpotential_internal(nu: float, t):
    """W(t) = -(nu+1) cot(t) on (0, pi), in units of pi*hbar/L."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t >= math.pi):
        raise ValueError("superpotential is singular at the walls; need t in (0, pi)")
    out = -(nu + 1.0) / np.tan(t)
    return float(out) if out.ndim == 0 else out


def superpotential(nu: float, x, L: float = math.pi, hbar: float = 1.0):
    """Physical superpotential -(hbar pi / L)(nu+1) cot(pi x / L)."""
    x = np.asarray(x, dtype=float)
    return superpotential_internal(nu, math.pi * x / L) * hbar * math.pi / L


@dataclass(frozen=True)
class AnalyticState:
    """A wavefunction with analytic derivatives, for operator application.

    ``value``, ``deriv`` and optional ``deriv2`` are callables of the
    dimensionless position t in (0, pi).
    """

    value: Callable
    deriv: Callable
    deriv2: Callable | None = None


def eigenstate_analytic(n: int, nu: float) -> AnalyticState:
    """Eigenfunction phi_{n,nu} as an AnalyticState (dimensionless units)."""
    basis = eigen_basis(float(nu), int(n))

    def value(t):
        return basis.values(np.asarray(t, dtype=float))[n]

    def deriv(t):
        return basis.values_and_derivs(np.asarray(t, dtype=float), order=1)[1][n]

    def deriv2(t):
        return basis.values_and_derivs(np.asarray(t, dtype=float), order=2)[2][n]

    return AnalyticState(value, deriv, deriv2)


def apply_lowering(state: AnalyticState, nu: float) -> AnalyticState:
    """A psi = W psi + psi' (dimensionless: hbar = 1)."""

    def value(t):
        return superpotential_internal(nu, t) * state.value(t) + state.deriv(t)

    def deriv(t):
        if state.deriv2 is None:
            raise ValueError("second derivative required to differentiate A psi")
        t = np.asarray(t, dtype=float)
        wp = (nu + 1.0) / np.sin(t) ** 2
        return (wp * state.value(t) + superpotential_internal(nu, t) * state.deriv(t)
                + state.deriv2(t))

    return AnalyticState(value, deriv)


def apply_raising(state: AnalyticState, nu: float) -> AnalyticState:
    """A^dag psi = W psi - psi' (dimensionless: hbar = 1)."""

    def value(t):
        return superpotential_internal(nu, t) * state.value(t) - state.deriv(t)

    def deriv(t):
        if state.deriv2 is None:
            raise ValueError("second derivative required to differentiate A^dag psi")
        t = np.asarray(t, dtype=float)
        wp = (nu + 1.0) / np.sin(t) ** 2
        return (wp * state.value(t) + superpotential_internal(nu, t) * state.deriv(t)
                - state.deriv2(t))

    return AnalyticState(value, deriv)


def _interior_rule(margin: float = DEFAULT_MARGIN, n_nodes: int = 400):
    return gauss_legendre(n_nodes, margin, math.pi - margin)


def factorization_residual(nu: float, n: int, margin: float = DEFAULT_MARGIN) -> float:
    """Relative residual of (A^dag A + E_0) phi_n = E_n phi_n.

    Dimensionless units absorb the 1/2m factor (2m = 1, E0 = 1).
    """
    rule = _interior_rule(margin)
    phi = eigenstate_analytic(n, nu)
    e0 = energy(0, nu)
    en = energy(n, nu)
    lowered = apply_lowering(phi, nu)
    raised_lowered = apply_raising(lowered, nu)
    resid = raised_lowered.value(rule.nodes) + (e0 - en) * phi.value(rule.nodes)
    num = math.sqrt(float(np.dot(rule.weights, np.abs(resid) ** 2)))
    den = en * math.sqrt(float(np.dot(rule.weights, np.abs(phi.value(rule.nodes)) ** 2)))
    return num / den


def check_partner_spectrum(nu: float, n: int, margin: float = DEFAULT_MARGIN) -> dict:
    """Verify (A A^dag + E_0) phi_{n, nu+1} = E_{n, nu+1} phi_{n, nu+1}.

    Returns a residual report with the expected partner eigenvalue
    (n + nu + 2)^2 and the relative quadrature residual.
    """
    rule = _interior_rule(margin)
    phi = eigenstate_analytic(n, nu + 1.0)
    e0 = energy(0, nu)
    target = energy(n, nu + 1.0)
    raised = apply_raising(phi, nu)
    lowered_raised = apply_lowering(raised, nu)
    resid = lowered_raised.value(rule.nodes) + (e0 - target) * phi.value(rule.nodes)
    num = math.sqrt(float(np.dot(rule.weights, np.abs(resid) ** 2)))
    den = target * math.sqrt(float(np.dot(rule.weights, np.abs(phi.value(rule.nodes)) ** 2)))
    return {"nu": nu, "n": n, "eigenvalue": target, "relative_residual": num / den}


def intertwining_defect(nu: float, n: int, margin: float = DEFAULT_MARGIN) -> float:
    """Non-parallelism of A phi_{n+1, nu} against phi_{n, nu+1}.

    Returns 1 - |<A phi_{n+1,nu}, phi_{n,nu+1}>|^2 / ||A phi_{n+1,nu}||^2.
    """
    rule = _interior_rule(margin)
    lowered = apply_lowering(eigenstate_analytic(n + 1, nu), nu).value(rule.nodes)
    partner = eigenstate_analytic(n, nu + 1.0).value(rule.nodes)
    inner = np.dot(rule.weights, lowered * partner)
    norm_sq = np.dot(rule.weights, lowered**2)
    return float(1.0 - inner**2 / norm_sq)
