"""SUSYQM coherent states for Poschl-Teller confining potentials.

Library layout:

* :mod:`ptcs.model`         -- units, configuration, grids
* :mod:`ptcs.specfun`       -- Gegenbauer polynomials, complex log-gamma,
                               Gauss-Legendre quadrature
* :mod:`ptcs.eigensystem`   -- spectrum, eigenfunctions, inner products
* :mod:`ptcs.susy`          -- superpotential, ladder operators, shape invariance
* :mod:`ptcs.coherent`      -- the coherent-state family
* :mod:`ptcs.quantization`  -- resolution of identity, symbol -> operator map,
                               lower symbols
* :mod:`ptcs.dynamics`      -- time evolution, Husimi-type distributions,
                               classical trajectories
* :mod:`ptcs.checks`        -- invariant suites behind ``ptcs check``
"""

from .coherent import (CoherentState, coherent_state, cs_coefficients,
                       cs_moments, cs_normalization, cs_wavefunction)
from .dynamics import (autocorrelation, classical_trajectory, evolve, husimi,
                       mean_energy, time_averaged_husimi)
from .eigensystem import (EigenBasis, SpectralState, eigen_basis, eigenfunction,
                          energy, norm_constant, overlap)
from .model import (GridSpec, PhysicalConfig, from_dimensionless, load_config,
                    make_config, natural_config, to_dimensionless)
from .quantization import (ClassicalSymbol, QuantizedOperator, builtin_symbol,
                           identity_weight, lower_symbol, quantize,
                           quantize_position)
from .susy import (apply_lowering, apply_raising, check_partner_spectrum,
                   superpotential)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
