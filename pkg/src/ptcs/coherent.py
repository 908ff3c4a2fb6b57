"""The coherent-state family: construction, normalization, coefficients, moments.

A state of the family is the normalized eigenvector of the lowering
operator with eigenvalue W(q) + i p.  Its profile is
``N exp((W(q) + i p) x / hbar) sin^{nu+1}(pi x / L)``.  The normalization
is obtained by quadrature (normative); two closed forms are provided for
reconciliation tests only.

To stay well conditioned at labels near the walls (where W diverges) the
exponent is internally shifted by kappa = max(a, 0) * pi with
a = -(nu+1) cot(t_q); the shift cancels against the normalization.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln
from scipy.special import loggamma as _scipy_loggamma

from .eigensystem import DEFAULT_NMAX, SpectralState, eigen_basis
from .specfun import gauss_legendre, log_gamma_complex

__all__ = [
    "decay_integral",
    "log_inv_norm_sq_internal",
    "cs_normalization",
    "cs_normalization_gamma_form",
    "cs_normalization_printed_form",
    "cs_wavefunction",
    "cs_wavefunction_internal",
    "cs_coefficients",
    "cs_coefficient_grid",
    "cs_moments",
    "CSMoments",
    "CoherentState",
    "coherent_state",
]


class TruncationWarning(UserWarning):
    """Emitted when the eigenbasis cut loses more mass than expected."""


def _require_interior(t: float):
    if not (0.0 < t < math.pi):
        raise ValueError(f"label position must be strictly interior, got t={t}")


def decay_integral(nu: float, b, rtol: float = 1e-12) -> np.ndarray:
    """I(b) = integral_0^pi exp(-2 b tau) sin^{2nu+2}(tau) dtau for b >= 0.

    Vectorized over b.  Uses the substitution tau = pi y^2 (clustering nodes
    at the decaying end) with node-doubling Gauss-Legendre.
    """
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if np.any(b < 0):
        raise ValueError("b must be >= 0")

    def estimate(n):
        rule = gauss_legendre(n, 0.0, 1.0)
        y = rule.nodes
        tau = math.pi * y**2
        f = 2.0 * math.pi * y * np.exp(-2.0 * np.outer(b, tau)) \
            * np.sin(tau) ** (2.0 * nu + 2.0)
        return f @ rule.weights

    n = 128
    prev = estimate(n)
    while n < 8192:
        n *= 2
        cur = estimate(n)
        if np.all(np.abs(cur - prev) <= rtol * np.abs(cur) + 1e-300):
            return cur
        prev = cur
    raise RuntimeError("decay_integral failed to converge")


def log_inv_norm_sq_internal(nu: float, a, method: str = "gamma") -> np.ndarray:
    """log of integral_0^pi exp(2 a t) sin^{2nu+2}(t) dt, vectorized over a.

    Kept in log space because the integral spans hundreds of orders of
    magnitude over a label grid.  ``method="gamma"`` evaluates the
    definite-integral identity
    pi exp(a pi) Gamma(2nu+3) / (2^{2nu+2} |Gamma(nu+2+ia)|^2)
    through complex log-gamma (fast, exact for any a); ``"quadrature"``
    integrates directly.  The two routes are reconciled in the
    normalization test suite.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if method == "quadrature":
        return 2.0 * math.pi * np.maximum(a, 0.0) + np.log(decay_integral(nu, np.abs(a)))
    if method != "gamma":
        raise ValueError(f"unknown method {method!r}")
    log_abs_gamma = _scipy_loggamma(nu + 2.0 + 1j * a).real
    return (math.log(math.pi) + a * math.pi + gammaln(2.0 * nu + 3.0)
            - (2.0 * nu + 2.0) * math.log(2.0) - 2.0 * log_abs_gamma)


def _label_exponent(nu: float, tq: float) -> tuple[float, float, float]:
    """(a, kappa, B) for a label at dimensionless position tq.

    a = W(tq), kappa = max(a, 0) pi, and B = I(|a|)^{-1/2} is the prefactor
    of the shifted profile B exp(a t - kappa + i p t) sin^{nu+1} t.
    """
    _require_interior(tq)
    a = -(nu + 1.0) / math.tan(tq)
    kappa = max(a, 0.0) * math.pi
    B = float(decay_integral(nu, abs(a))) ** -0.5
    return a, kappa, B


def cs_normalization(nu: float, q: float, L: float = math.pi) -> float:
    """Normalization constant by quadrature (normative definition).

    N = [integral_0^L exp(2 W(q) x / hbar) sin^{2nu+2}(pi x/L) dx]^{-1/2},
    guaranteeing unit norm of the coherent state.
    """
    tq = math.pi * q / L
    a, kappa, B = _label_exponent(nu, tq)
    return math.sqrt(math.pi / L) * math.exp(-kappa) * B


def cs_normalization_gamma_form(nu: float, q: float, L: float = math.pi) -> float:
    """Closed form of N from the definite-integral identity

    1/N^2 = L exp(a pi) Gamma(2nu+3) / (2^{2nu+2} |Gamma(nu+2+ia)|^2),
    a = -(nu+1) cot(pi q / L).  Cross-check only; quadrature is normative.
    """
    tq = math.pi * q / L
    _require_interior(tq)
    a = -(nu + 1.0) / math.tan(tq)
    log_abs_gamma = log_gamma_complex(nu + 2.0 + 1j * a).real
    log_inv_nsq = (math.log(L) + a * math.pi + gammaln(2.0 * nu + 3.0)
                   - (2.0 * nu + 2.0) * math.log(2.0) - 2.0 * log_abs_gamma)
    return math.exp(-0.5 * log_inv_nsq)


def cs_normalization_printed_form(nu: float, q: float, L: float = math.pi) -> float:
    """The printed normalization display, evaluated verbatim:

    2^{nu+1} |Gamma(nu+2 - i(nu+1)cot(pi q/L))| / (sqrt(L) sqrt(Gamma(2nu+3)))
    * exp[(pi/2)(nu+1) cot(pi q/L)].

    It is labeled as 1/N^2 at the source but is dimensionally 1/sqrt(length)
    and numerically coincides with N itself; see the reconciliation tests.
    """
    tq = math.pi * q / L
    _require_interior(tq)
    cot = 1.0 / math.tan(tq)
    log_abs_gamma = log_gamma_complex(nu + 2.0 - 1j * (nu + 1.0) * cot).real
    return math.exp((nu + 1.0) * math.log(2.0) + log_abs_gamma
                    - 0.5 * math.log(L) - 0.5 * gammaln(2.0 * nu + 3.0)
                    + 0.5 * math.pi * (nu + 1.0) * cot)


def cs_wavefunction_internal(nu: float, tq: float, pt: float, t) -> np.ndarray:
    """Normalized coherent-state profile on [0, pi] (dimensionless units)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > math.pi):
        raise ValueError("t outside [0, pi]")
    a, kappa, B = _label_exponent(nu, tq)
    with np.errstate(invalid="ignore"):
        profile = B * np.exp((a + 1j * pt) * t - kappa) * np.sin(t) ** (nu + 1.0)
    # sin(t)**(nu+1) is exactly 0 at the walls for nu >= 0
    return np.where((t == 0.0) | (t == math.pi), 0.0, profile)


def cs_wavefunction(nu: float, q: float, p: float, x, L: float = math.pi,
                    hbar: float = 1.0):
    """Physical coherent-state wavefunction N exp((W(q)+ip)x/hbar) sin^{nu+1}.

    The modulus is independent of p and attains its maximum at x = q.
    """
    tq = math.pi * q / L
    pt = p * L / (math.pi * hbar)
    out = math.sqrt(math.pi / L) * cs_wavefunction_internal(nu, tq, pt, np.asarray(x) * math.pi / L)
    return complex(out) if out.ndim == 0 else out


def cs_coefficients(nu: float, tq: float, pt: float, nmax: int = DEFAULT_NMAX,
                    nu_basis: float | None = None, warn_mass: float = 1e-6) -> SpectralState:
    """Eigenbasis coefficients c_n = <phi_n | eta_{q,p}> by quadrature.

    ``nu_basis`` selects the expansion basis (defaults to the family's nu;
    the dynamics module expands nu-family states over the nu=0 basis).
    Node count doubles until the captured mass stabilizes.
    """
    if nu_basis is None:
        nu_basis = nu
    basis = eigen_basis(float(nu_basis), int(nmax))
    a, kappa, B = _label_exponent(nu, tq)

    def coeffs_at(n_nodes):
        rule = gauss_legendre(n_nodes, 0.0, math.pi)
        t = rule.nodes
        eta = B * np.exp((a + 1j * pt) * t - kappa) * np.sin(t) ** (nu + 1.0)
        return basis.values(t) @ (rule.weights * eta)

    n = 256
    prev = coeffs_at(n)
    while n < 8192:
        n *= 2
        cur = coeffs_at(n)
        if abs(np.sum(np.abs(cur) ** 2) - np.sum(np.abs(prev) ** 2)) < 1e-13:
            break
        prev = cur
    state = SpectralState(nu=float(nu_basis), coeffs=cur)
    if state.truncation_mass > warn_mass:
        warnings.warn(
            f"truncation mass {state.truncation_mass:.3e} at label "
            f"(tq={tq:.4f}, pt={pt:.4f}); increase nmax",
            TruncationWarning)
    return state


def cs_coefficient_grid(nu: float, tqs, pts, nmax: int = DEFAULT_NMAX,
                        nu_basis: float | None = None,
                        n_nodes: int = 800) -> np.ndarray:
    """Coefficients over a label grid: array of shape (nmax+1, len(tqs), len(pts)).

    All labels share one quadrature rule; the momentum dependence factors
    into a single plane-wave matrix, so each position column is one matmul.
    """
    if nu_basis is None:
        nu_basis = nu
    tqs = np.asarray(tqs, dtype=float)
    pts = np.asarray(pts, dtype=float)
    basis = eigen_basis(float(nu_basis), int(nmax))
    rule = gauss_legendre(n_nodes, 0.0, math.pi)
    t, w = rule.nodes, rule.weights
    phi = basis.values(t)                         # (N+1, K)
    plane = np.exp(1j * np.outer(t, pts))         # (K, P)
    sin_pow = np.sin(t) ** (nu + 1.0)
    out = np.empty((nmax + 1, len(tqs), len(pts)), dtype=complex)
    for i, tq in enumerate(tqs):
        a, kappa, B = _label_exponent(nu, float(tq))
        base = B * np.exp(a * t - kappa) * sin_pow * w
        out[:, i, :] = (phi * base) @ plane
    return out


@dataclass(frozen=True)
class CSMoments:
    """Position/momentum moments of a coherent state (dimensionless units)."""

    mean_p: float
    delta_p: float
    mean_w: float
    delta_w: float
    mean_wprime: float
    norm_check: float

    @property
    def saturation_defect(self) -> float:
        """Delta W * Delta P - (1/2) <W'>; zero when uncertainty saturates."""
        return self.delta_w * self.delta_p - 0.5 * self.mean_wprime


def cs_moments(nu: float, tq: float, pt: float, rtol: float = 1e-11) -> CSMoments:
    """Moments <P>, dP, <W(Q)>, dW, <W'(Q)> by adaptive quadrature.

    dP uses the first-derivative form <P^2> = || eta' ||^2 (exact by parts
    since eta vanishes at the walls), which stays finite down to nu = 0.
    """
    a, kappa, B = _label_exponent(nu, tq)

    def moments_at(n_nodes):
        rule = gauss_legendre(n_nodes, 0.0, math.pi)
        t, w = rule.nodes, rule.weights
        s = np.sin(t)
        rho = B**2 * np.exp(2.0 * (a * t - kappa)) * s ** (2.0 * nu + 2.0)
        cot = np.cos(t) / s
        logderiv = a + (nu + 1.0) * cot    # (d/dt log |eta|)
        wvals = -(nu + 1.0) * cot
        integrands = np.stack([
            rho,                              # norm
            rho * (logderiv**2 + pt**2),      # <P^2> = int |eta'|^2
            rho * wvals,                      # <W>
            rho * wvals**2,                   # <W^2>
            rho * (nu + 1.0) / s**2,          # <W'>
        ])
        return integrands @ w

    n = 256
    prev = moments_at(n)
    while n < 16384:
        n *= 2
        cur = moments_at(n)
        if np.all(np.abs(cur - prev) <= rtol * np.maximum(np.abs(cur), 1e-300)):
            break
        prev = cur
    else:
        raise RuntimeError(f"moment integrals did not converge at (tq={tq}, pt={pt})")
    norm, p2, w1, w2, wp = cur
    mean_p = pt * norm
    delta_p = math.sqrt(max(p2 - mean_p**2, 0.0))
    delta_w = math.sqrt(max(w2 - w1**2, 0.0))
    return CSMoments(mean_p=mean_p, delta_p=delta_p, mean_w=w1,
                     delta_w=delta_w, mean_wprime=wp, norm_check=norm)


@dataclass(frozen=True)
class CoherentState:
    """A coherent state: label, eigenvalue, normalization, and coefficients."""

    nu: float
    tq: float
    pt: float
    eigenvalue: complex
    normalization: float
    coeffs: SpectralState = field(repr=False)


def coherent_state(nu: float, tq: float, pt: float, nmax: int = DEFAULT_NMAX,
                   nu_basis: float | None = None) -> CoherentState:
    """Construct a coherent state in dimensionless units."""
    _require_interior(tq)
    w = -(nu + 1.0) / math.tan(tq)
    coeffs = cs_coefficients(nu, tq, pt, nmax=nmax, nu_basis=nu_basis)
    return CoherentState(nu=float(nu), tq=float(tq), pt=float(pt),
                         eigenvalue=complex(w, pt),
                         normalization=cs_normalization(nu, tq, L=math.pi),
                         coeffs=coeffs)
