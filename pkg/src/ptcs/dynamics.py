"""Time evolution, phase-space (Husimi-type) distributions, and trajectories.

All quantities are dimensionless (hbar = 1, E0 = 1, t in [0, pi]); the CLI
layer converts to physical units.  The evolving Hamiltonian defaults to the
nu = 0 well, for which the spectrum (n+1)^2 is integer and the evolution is
exactly periodic with period 2 pi.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coherent import cs_coefficient_grid, cs_coefficients
from .eigensystem import SpectralState, energy
from .model import GridSpec

__all__ = [
    "PhaseSpaceDistribution",
    "phase_space_axes",
    "evolve",
    "autocorrelation",
    "husimi",
    "time_averaged_husimi",
    "sampled_time_average",
    "mean_energy",
    "classical_trajectory",
    "REVIVAL_PERIOD",
]

#: Exact revival period of the nu = 0 well in dimensionless time.
REVIVAL_PERIOD = 2.0 * math.pi


@dataclass
class PhaseSpaceDistribution:
    """Sampled distribution rho(q, p) >= 0 on a rectangular grid.

    ``values[i, j]`` is rho at (tqs[i], pts[j]); rho carries the measure
    dq dp / (2 pi), so ``mass`` tends to the squared norm of the state as
    the grid grows.
    """

    tqs: np.ndarray
    pts: np.ndarray
    values: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (len(self.tqs), len(self.pts)):
            raise ValueError("values shape does not match axes")
        if np.any(self.values < 0):
            raise ValueError("distribution values must be nonnegative")

    @property
    def mass(self) -> float:
        dq = self.tqs[1] - self.tqs[0]
        dp = self.pts[1] - self.pts[0]
        return float(np.sum(self.values) * dq * dp)

    def peak(self) -> tuple[float, float]:
        """(tq, pt) of the grid cell with the largest value."""
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.tqs[i]), float(self.pts[j])


def phase_space_axes(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Dimensionless (tq, pt) axes of a grid spec."""
    margin = grid.q_margin * math.pi
    tqs = np.linspace(margin, math.pi - margin, grid.q_count)
    pts = np.linspace(-grid.p_max, grid.p_max, grid.p_count)
    return tqs, pts


def evolve(state: SpectralState, t: float, nu_evolve: float = 0.0) -> SpectralState:
    """Phase evolution c_n -> exp(-i E_n t) c_n; exactly norm preserving."""
    n = np.arange(state.nmax + 1)
    phases = np.exp(-1j * (n + nu_evolve + 1.0) ** 2 * t)
    return SpectralState(nu=state.nu, coeffs=state.coeffs * phases)


def autocorrelation(state: SpectralState, t: float, nu_evolve: float = 0.0) -> complex:
    """<phi(0)|phi(t)> = sum |c_n|^2 exp(-i E_n t)."""
    n = np.arange(state.nmax + 1)
    return complex(np.sum(np.abs(state.coeffs) ** 2
                          * np.exp(-1j * (n + nu_evolve + 1.0) ** 2 * t)))


def _coefficient_grid_threaded(nu_cs, tqs, pts, nmax, nu_basis, n_nodes):
    workers = int(os.environ.get("PTCS_THREADS", "1"))
    if workers <= 1 or len(tqs) < 2 * workers:
        return cs_coefficient_grid(nu_cs, tqs, pts, nmax=nmax,
                                   nu_basis=nu_basis, n_nodes=n_nodes)
    chunks = np.array_split(np.arange(len(tqs)), workers)
    out = np.empty((nmax + 1, len(tqs), len(pts)), dtype=complex)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(cs_coefficient_grid, nu_cs, tqs[idx], pts,
                               nmax, nu_basis, n_nodes): idx for idx in chunks}
        for fut, idx in futures.items():
            out[:, idx, :] = fut.result()
    return out


def husimi(state: SpectralState, nu_cs: float, grid: GridSpec,
           n_nodes: int = 800) -> PhaseSpaceDistribution:
    """rho(q, p) = |<eta_{q,p}|phi>|^2 / (2 pi) on the grid.

    The coherent-state family parameter ``nu_cs`` may differ from the nu of
    the basis carrying ``state``.
    """
    tqs, pts = phase_space_axes(grid)
    C = _coefficient_grid_threaded(nu_cs, tqs, pts, state.nmax, state.nu, n_nodes)
    amp = np.einsum("nij,n->ij", np.conj(C), state.coeffs)
    rho = np.abs(amp) ** 2 / (2.0 * math.pi)
    return PhaseSpaceDistribution(tqs=tqs, pts=pts, values=rho,
                                  meta={"nu_cs": nu_cs, "kind": "husimi"})


def time_averaged_husimi(state: SpectralState, nu_cs: float, grid: GridSpec,
                         n_nodes: int = 800) -> PhaseSpaceDistribution:
    """Infinite-time average of the evolving distribution, by the diagonal formula.

    The spectrum (n + nu + 1)^2 is strictly increasing, so time averaging
    kills every off-diagonal phase factor and
    rho_bar = (1/2pi) sum_n |c_n|^2 |<phi_n|eta_{q,p}>|^2 exactly.
    """
    tqs, pts = phase_space_axes(grid)
    C = _coefficient_grid_threaded(nu_cs, tqs, pts, state.nmax, state.nu, n_nodes)
    rho = np.einsum("n,nij->ij", np.abs(state.coeffs) ** 2,
                    np.abs(C) ** 2) / (2.0 * math.pi)
    return PhaseSpaceDistribution(tqs=tqs, pts=pts, values=rho,
                                  meta={"nu_cs": nu_cs, "kind": "time-averaged"})


def sampled_time_average(state: SpectralState, nu_cs: float, grid: GridSpec,
                         n_samples: int = 512, nu_evolve: float = 0.0,
                         n_nodes: int = 800) -> PhaseSpaceDistribution:
    """Cross-check of the diagonal formula: mean of rho over one exact period."""
    tqs, pts = phase_space_axes(grid)
    C = _coefficient_grid_threaded(nu_cs, tqs, pts, state.nmax, state.nu, n_nodes)
    Cc = np.conj(C).reshape(state.nmax + 1, -1)
    n = np.arange(state.nmax + 1)
    energies = (n + nu_evolve + 1.0) ** 2
    acc = np.zeros(Cc.shape[1])
    for k in range(n_samples):
        t = REVIVAL_PERIOD * k / n_samples
        ck = state.coeffs * np.exp(-1j * energies * t)
        acc += np.abs(ck @ Cc) ** 2
    rho = acc.reshape(len(tqs), len(pts)) / (n_samples * 2.0 * math.pi)
    return PhaseSpaceDistribution(tqs=tqs, pts=pts, values=rho,
                                  meta={"nu_cs": nu_cs, "kind": "sampled-average"})


def mean_energy(nu_cs: float, tq0: float, pt0: float, nmax: int = 64) -> dict:
    """Mean energy of the coherent state under the nu = 0 Hamiltonian.

    Returned both ways: the eigenbasis coefficient sum sum E_n |c_n|^2 and
    the closed form p0^2 + (nu+1)^2 / ((2 nu + 1) sin^2 q0) (units E0).
    """
    coeffs = cs_coefficients(nu_cs, tq0, pt0, nmax=nmax, nu_basis=0.0)
    weights = np.abs(coeffs.coeffs) ** 2
    coeff_sum = float(np.sum(weights * np.array([energy(n, 0.0) for n in range(nmax + 1)])))
    closed = pt0**2 + (nu_cs + 1.0) ** 2 / ((2.0 * nu_cs + 1.0) * math.sin(tq0) ** 2)
    return {"coefficient_sum": coeff_sum, "closed_form": closed,
            "difference": coeff_sum - closed,
            "truncation_mass": coeffs.truncation_mass}


def classical_trajectory(E: float, nu: float, n_points: int = 400) -> np.ndarray:
    """Level set p(q) = +-sqrt(E - (nu+1)^2 / ((2nu+1) sin^2 q)) as (tq, pt) rows.

    Returns a closed loop sampled between the classical turning points.
    """
    coeff = (nu + 1.0) ** 2 / (2.0 * nu + 1.0)
    if E <= coeff:
        raise ValueError(f"E={E} is below the effective potential minimum {coeff}")
    sin_turn = math.sqrt(coeff / E)
    t_lo = math.asin(sin_turn)
    t_hi = math.pi - t_lo
    tq = np.linspace(t_lo, t_hi, n_points // 2)
    p = np.sqrt(np.maximum(E - coeff / np.sin(tq) ** 2, 0.0))
    upper = np.column_stack([tq, p])
    lower = np.column_stack([tq[::-1], -p[::-1]])
    return np.vstack([upper, lower])
