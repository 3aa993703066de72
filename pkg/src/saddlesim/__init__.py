"""Simulation toolkit for a levitated nanoparticle in a rotating saddle-shaped
optical trap built from a Gaussian and two opposite-charge Laguerre-Gauss modes.

The package integrates the Gaussian-moment dynamics of the transverse
center-of-mass motion (unconditional and measurement-conditioned), analyses
rotational stability, and evaluates force-sensing bounds.  All dynamics run in
dimensionless quadrature units where the vacuum covariance is the identity
over two; SI conversion happens only at the CSV boundary.
"""

__version__ = "0.1.0"

from .params import (
    ParticleParams,
    TrapConfig,
    ReferenceTweezer,
    DerivedParams,
    derive,
    recoil_rate,
    localization_rate,
    absorbed_ratio,
)
from .gaussian import GaussianState, Diagnostics, thermal_state, purity, log_negativity, uncertainties
from .dynamics import TrapSchedule, Segment, Trajectory, integrate
from .stability import StabilityReport, threshold, floquet

__all__ = [
    "ParticleParams",
    "TrapConfig",
    "ReferenceTweezer",
    "DerivedParams",
    "derive",
    "recoil_rate",
    "localization_rate",
    "absorbed_ratio",
    "GaussianState",
    "Diagnostics",
    "thermal_state",
    "purity",
    "log_negativity",
    "uncertainties",
    "TrapSchedule",
    "Segment",
    "Trajectory",
    "integrate",
    "StabilityReport",
    "threshold",
    "floquet",
]
