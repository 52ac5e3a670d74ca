"""h-scattered F_q-subspaces, their Delsarte duals, MRD codes and linear sets."""

from __future__ import annotations

from .errors import CapError, HScatteredError, InputError
from .gf import FieldTower, make_field
from .subspace import (
    FqSubspace,
    direct_sum,
    gabidulin_subspace,
    hyperplane_spectrum,
    is_h_scattered,
    subgeometry,
)

__version__ = "0.1.0"

__all__ = [
    "CapError",
    "FieldTower",
    "FqSubspace",
    "HScatteredError",
    "InputError",
    "direct_sum",
    "gabidulin_subspace",
    "hyperplane_spectrum",
    "is_h_scattered",
    "make_field",
    "subgeometry",
]
