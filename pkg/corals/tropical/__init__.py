"""
Tropical Corals - Computational core

Exact rational arithmetic throughout; every value type is an immutable
dataclass.
"""

from corals.tropical.constraints import Constraint, in_stable_range, is_good, sample_general_good, stabilize
from corals.tropical.coral import Degree, TropicalCoral, build_coral, canonical_form, validate_coral
from corals.tropical.coralgraph import CoralGraph, CoralType, VertexClass, extend_graph, validate_graph
from corals.tropical.counting import count, extend_coral, restrict_curve
from corals.tropical.lattice import LatticeVector, QuotientClass, RationalPoint
from corals.tropical.moduli import enumerate_types, realize
from corals.tropical.morse import MorseTree, coral_to_tmt, lift_tmt, validate_tmt
from corals.tropical.quotient import count_series, normalize_mod_Z, tropical_area

__all__ = [
    "Constraint",
    "CoralGraph",
    "CoralType",
    "Degree",
    "LatticeVector",
    "MorseTree",
    "QuotientClass",
    "RationalPoint",
    "TropicalCoral",
    "VertexClass",
    "build_coral",
    "canonical_form",
    "coral_to_tmt",
    "count",
    "count_series",
    "enumerate_types",
    "extend_coral",
    "extend_graph",
    "in_stable_range",
    "is_good",
    "lift_tmt",
    "normalize_mod_Z",
    "realize",
    "restrict_curve",
    "sample_general_good",
    "stabilize",
    "tropical_area",
    "validate_coral",
    "validate_graph",
    "validate_tmt",
]
