"""Calibrated subactions and maximal ergodic values by the 1/2 iterative procedure."""

from .grid import INTERVAL, PERIODIC, GridFunction, sup_distance, sup_normalize
from .potentials import Potential, catalog, CATALOG_NAMES
from .solver import SolverConfig, SubactionResult, bellman_max, compute_R, half_step, mather_support, solve
from .systems import Matrix2, doubling_system, farey_like_system, mobius_system

__version__ = "0.1.0"
