"""Partitioned fluid-structure interaction laboratory.

Couples an incompressible Stokes layer to a compressible linear-elastic
solid across a flat interface with added-mass partitioned (amp),
traditional (tp), or anti-traditional (at) interface conditions, and
bundles the supporting verification machinery: manufactured and
traveling-wave exact solutions, normal-mode stability analysis, and
experiment drivers.
"""

from .coupling import Simulation, SimulationConfig, run_simulation
from .domain import Geometry, GridPair, MaterialParams

__all__ = [
    "Simulation",
    "SimulationConfig",
    "run_simulation",
    "Geometry",
    "GridPair",
    "MaterialParams",
]

__version__ = "0.1.0"
