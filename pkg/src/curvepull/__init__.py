"""Exact pullback dynamics of simple closed curves under quadratic
Thurston maps with four postcritical points."""

from .curves import (
    Curve,
    EntersCycle,
    EventuallyTrivial,
    OrbitResult,
    PullbackError,
    PullbackStep,
    PullbackSystem,
    Unresolved,
)
from .endo import DomainError, ParityHom, VirtualEndo, hat_orbit
from .mapdef import MapDefError, MapDefinition, builtin, load_map, parse_mapdef
from .spectra import (
    AbelianVirtualEndo,
    RationalMatrix,
    contraction_coefficient_estimate,
    is_contracting,
    leading_eigenvalue,
)
from .words import CyclicWord, Letter, Word, conjugacy_equal, cyclic_reduce, primitive_root

__all__ = [
    "AbelianVirtualEndo",
    "Curve",
    "CyclicWord",
    "DomainError",
    "EntersCycle",
    "EventuallyTrivial",
    "Letter",
    "MapDefError",
    "MapDefinition",
    "OrbitResult",
    "ParityHom",
    "PullbackError",
    "PullbackStep",
    "PullbackSystem",
    "RationalMatrix",
    "Unresolved",
    "VirtualEndo",
    "Word",
    "builtin",
    "conjugacy_equal",
    "contraction_coefficient_estimate",
    "cyclic_reduce",
    "hat_orbit",
    "is_contracting",
    "leading_eigenvalue",
    "load_map",
    "parse_mapdef",
    "primitive_root",
]
