"""Entanglement entropy and logarithmic negativity of hypercubic regions in
harmonic lattice ground states, with the analytical area-law bounds."""

from .circulant import BlockCirculant, build_potential, element, fractional_power, materialize
from .gaussian import (
    entanglement_entropy,
    ground_covariance,
    log_negativity,
    reduce,
    symplectic_spectrum,
)
from .lattice import LatticeSpec, Region, lattice_distance, reachable_exterior_bound, shells

__all__ = [
    "BlockCirculant",
    "LatticeSpec",
    "Region",
    "build_potential",
    "element",
    "entanglement_entropy",
    "fractional_power",
    "ground_covariance",
    "lattice_distance",
    "log_negativity",
    "materialize",
    "reachable_exterior_bound",
    "reduce",
    "shells",
    "symplectic_spectrum",
]
