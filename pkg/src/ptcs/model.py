"""Physical configuration, unit conversion, and phase-space grids.

All core numerics in this package run in dimensionless units:

* position  t  = pi * x / L          in [0, pi]
* momentum  pt = p * L / (pi * hbar)
* energy    Et = E / E0              with E0 = hbar^2 pi^2 / (2 m L^2)
* time      tt = t * E0 / hbar

In these units hbar = 1, 2m = 1, the well is [0, pi], and the ground-scale
energy is 1.  SI (or any other) unit systems enter only through
:class:`PhysicalConfig` at the API/CLI boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from scipy import constants as _const

__all__ = [
    "PhysicalConfig",
    "DimensionlessPoint",
    "GridSpec",
    "make_config",
    "natural_config",
    "load_config",
    "to_dimensionless",
    "from_dimensionless",
]

#: Named particle shortcuts usable in JSON config files.
PARTICLES = {
    "electron": {"mass": _const.m_e, "hbar": _const.hbar},
    "proton": {"mass": _const.m_p, "hbar": _const.hbar},
}


class ConfigError(ValueError):
    """Raised for invalid physical configuration input."""


@dataclass(frozen=True)
class PhysicalConfig:
    """Immutable physical parameters of the confined particle.

    Attributes
    ----------
    L : float
        Well width (meters, or 1 in natural units).
    mass : float
        Particle mass.
    hbar : float
        Reduced Planck constant.
    nu : float
        Dimensionless potential strength, >= 0.
    E0 : float
        Ground-scale energy hbar^2 pi^2 / (2 m L^2), derived.
    """

    L: float
    mass: float
    hbar: float
    nu: float
    E0: float

    @property
    def p_scale(self) -> float:
        """Momentum unit pi*hbar/L."""
        return math.pi * self.hbar / self.L

    @property
    def t_scale(self) -> float:
        """Time unit hbar/E0."""
        return self.hbar / self.E0


@dataclass(frozen=True)
class DimensionlessPoint:
    """Dimensionless coordinates; any component may be absent (None)."""

    xt: float | None = None
    pt: float | None = None
    Et: float | None = None
    tt: float | None = None


@dataclass(frozen=True)
class GridSpec:
    """Rectangular phase-space sampling of the strip [0, L] x R.

    q_margin excludes the singular endpoints q in {0, L}; it is expressed
    as a fraction of L in dimensionless form (margin in t is pi*q_margin/L).
    """

    q_count: int = 256
    p_count: int = 256
    p_max: float = 12.0
    q_margin: float = 0.01

    def __post_init__(self):
        if self.q_count < 2 or self.p_count < 2:
            raise ConfigError("grid counts must be >= 2")
        if not (self.p_max > 0):
            raise ConfigError("p_max must be positive")
        if not (0 < self.q_margin < 0.25):
            raise ConfigError("q_margin must lie in (0, L/4)")


def _check_finite_positive(name: str, value: float, allow_zero: bool = False):
    if not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{name} must be a finite number, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        raise ConfigError(f"{name} must be {'>= 0' if allow_zero else '> 0'}, got {value}")


def make_config(L: float, mass: float, hbar: float, nu: float) -> PhysicalConfig:
    """Validate inputs and build an immutable configuration with E0 derived."""
    _check_finite_positive("L", L)
    _check_finite_positive("mass", mass)
    _check_finite_positive("hbar", hbar)
    _check_finite_positive("nu", nu, allow_zero=True)
    E0 = hbar**2 * math.pi**2 / (2.0 * mass * L**2)
    return PhysicalConfig(L=float(L), mass=float(mass), hbar=float(hbar), nu=float(nu), E0=E0)


def natural_config(nu: float = 0.0) -> PhysicalConfig:
    """Config in internal natural units: L = pi, hbar = 1, 2m = 1, E0 = 1."""
    return make_config(L=math.pi, mass=0.5, hbar=1.0, nu=nu)


def to_dimensionless(config: PhysicalConfig, q: float | None = None,
                     p: float | None = None, E: float | None = None,
                     t: float | None = None) -> DimensionlessPoint:
    """Convert any subset of (q, p, E, t) to dimensionless components."""
    xt = None
    if q is not None:
        if not (0.0 <= q <= config.L):
            raise ConfigError(f"q={q} outside [0, L={config.L}]")
        xt = math.pi * q / config.L
    pt = None if p is None else p / config.p_scale
    Et = None if E is None else E / config.E0
    tt = None if t is None else t / config.t_scale
    return DimensionlessPoint(xt=xt, pt=pt, Et=Et, tt=tt)


def from_dimensionless(config: PhysicalConfig, point: DimensionlessPoint):
    """Inverse of :func:`to_dimensionless`; returns a (q, p, E, t) tuple."""
    q = None if point.xt is None else point.xt * config.L / math.pi
    p = None if point.pt is None else point.pt * config.p_scale
    E = None if point.Et is None else point.Et * config.E0
    t = None if point.tt is None else point.tt * config.t_scale
    return q, p, E, t


def load_config(source) -> PhysicalConfig:
    """Load a configuration from a JSON file path or a dict.

    Recognized keys: ``L``, ``mass``, ``hbar``, ``nu``, optional
    ``units: "SI" | "natural"`` and ``particle: "electron"`` which fills in
    mass and hbar from CODATA values.
    """
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = dict(source)
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")

    units = data.get("units", "SI")
    if units not in ("SI", "natural"):
        raise ConfigError(f"unknown units {units!r}")

    defaults = {}
    if units == "natural":
        defaults = {"L": math.pi, "mass": 0.5, "hbar": 1.0}
    particle = data.get("particle")
    if particle is not None:
        if particle not in PARTICLES:
            raise ConfigError(f"unknown particle {particle!r}")
        defaults.update(PARTICLES[particle])

    try:
        L = data.get("L", defaults.get("L"))
        mass = data.get("mass", defaults.get("mass"))
        hbar = data.get("hbar", defaults.get("hbar"))
    except KeyError as exc:  # pragma: no cover
        raise ConfigError(str(exc)) from exc
    nu = data.get("nu", 0.0)
    if L is None or mass is None or hbar is None:
        raise ConfigError("config must provide L, mass, hbar (or a particle shortcut)")
    return make_config(L, mass, hbar, nu)
