"""Heat flux through a locally anisotropic XY chain between two thermal reservoirs.

The package has two independent routes to the nonequilibrium steady-state
heat flux:

* a closed form built from stationary scattering theory
  (:mod:`nessxy.scattering`, :mod:`nessxy.flux`), and
* a brute-force oracle that evolves the decoupled initial state on a
  truncated lattice and takes the ergodic mean (:mod:`nessxy.oracle`).

:mod:`nessxy.lattice` holds the doubled (Nambu) one-particle operators,
:mod:`nessxy.momentum` the momentum/energy representations and
:mod:`nessxy.pfaffian` the quasifree many-point functions.
"""

from . import flux, lattice, momentum, oracle, pfaffian, scattering
from .flux import FluxResult, entropy_production, flux_lower_bound, heat_flux, sweep
from .lattice import LatticeConfig
from .oracle import OracleRun, WavefrontError, ergodic_flux
from .pfaffian import quasifree_2m_point
from .scattering import WaveImage, wave_apply

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "flux",
    "lattice",
    "momentum",
    "oracle",
    "pfaffian",
    "scattering",
    "FluxResult",
    "LatticeConfig",
    "OracleRun",
    "WaveImage",
    "WavefrontError",
    "entropy_production",
    "ergodic_flux",
    "flux_lower_bound",
    "heat_flux",
    "quasifree_2m_point",
    "sweep",
    "wave_apply",
]
