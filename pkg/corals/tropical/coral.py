"""
Tropical corals as geometric objects.

A TropicalCoral is a CoralType together with rational vertex positions on
the truncated cone: interior vertices strictly above height 1, negative
vertices on the boundary h = 1.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Mapping, Optional, Tuple

from corals.core.errors import BadScale, InvalidCoral
from corals.core.validation import ValidationReport
from corals.tropical.coralgraph import (
    CoralGraph,
    CoralType,
    VertexClass,
    canonicalize,
    check_type,
    solve_negative_weight,
    type_key,
)
from corals.tropical.lattice import (
    LatticeVector,
    RationalPoint,
    direction_between,
    primitive,
    primitive_of,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TropicalCoral:
    """A coral type with rational vertex positions."""
    ctype: CoralType
    positions: Dict[int, RationalPoint]

    __hash__ = None

    @property
    def graph(self) -> CoralGraph:
        return self.ctype.graph

    def position(self, v: int) -> RationalPoint:
        return self.positions[v]


@dataclass(frozen=True)
class Degree:
    """Weighted directions of positive ends (in label order) and negative vertices."""
    positive: Tuple[LatticeVector, ...]
    negative: Tuple[LatticeVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "positive", tuple(self.positive))
        object.__setattr__(self, "negative", tuple(self.negative))

    @property
    def l(self) -> int:
        return len(self.positive)

    @property
    def m(self) -> int:
        return len(self.negative)

    def is_balanced(self) -> bool:
        total = LatticeVector(0, 0)
        for v in self.positive + self.negative:
            total = total + v
        return total.is_zero()

    def positive_primitives(self) -> List[LatticeVector]:
        return [primitive(v)[0] for v in self.positive]

    def same_multiset(self, other: "Degree") -> bool:
        return (Counter(self.positive) == Counter(other.positive)
                and Counter(self.negative) == Counter(other.negative))

    def check(self) -> ValidationReport:
        report = ValidationReport("degree")
        if not self.positive:
            report.add("no positive entry")
        if not self.negative:
            report.add("no negative entry")
        if any(v.b <= 0 for v in self.positive):
            report.add("positive entry without positive height")
        if any(v.b >= 0 for v in self.negative):
            report.add("negative entry without negative height")
        if not self.is_balanced():
            report.add("entries do not sum to zero")
        return report


# ============================================================================
# Construction
# ============================================================================

def build_coral(graph: CoralGraph,
                positions: Mapping[int, RationalPoint],
                ray_dirs: Mapping[int, LatticeVector],
                negvert_weights: Optional[Mapping[int, int]] = None) -> TropicalCoral:
    """Assemble a coral from positions and positive-edge directions.

    Bounded flag directions and negative vertex directions are read off the
    geometry. Negative vertex weights are solved from balancing when not
    given. Raises InvalidCoral when the geometry cannot define a type.
    """
    positions = {int(v): RationalPoint(p.x, p.h) for v, p in positions.items()}
    missing = [v for v in graph.vertex_ids if v not in positions]
    if missing:
        raise InvalidCoral(f"positions missing for vertices {missing}")

    flag_dirs: Dict[Tuple[int, int], LatticeVector] = {}
    for e, v in graph.positive_edges:
        if e not in ray_dirs:
            raise InvalidCoral(f"direction missing for positive edge {e}")
        flag_dirs[(v, e)] = ray_dirs[e]
    for e, (a, b) in graph.bounded_edges:
        pa, pb = positions[a], positions[b]
        if pa == pb:
            raise InvalidCoral(f"bounded edge {e} has zero length")
        u, _ = direction_between(pa, pb)
        flag_dirs[(a, e)] = u
        flag_dirs[(b, e)] = -u

    negvert_dirs = {}
    for v in graph.negative_vertices:
        p = positions[v]
        if p.x == 0 and p.h == 0:
            raise InvalidCoral(f"negative vertex {v} sits at the origin")
        negvert_dirs[v] = primitive_of(-p.x, -p.h)[0]

    ctype = CoralType(graph, flag_dirs, negvert_dirs, dict(negvert_weights or {}))
    if negvert_weights is None:
        solved = {}
        for v in graph.negative_vertices:
            w = solve_negative_weight(ctype, v)
            solved[v] = w if w is not None else 0
        ctype = CoralType(graph, flag_dirs, negvert_dirs, solved)
    return TropicalCoral(ctype, positions)


def forced_position(u_v: LatticeVector) -> RationalPoint:
    """The height-1 point whose ray toward the origin has direction u_v."""
    return RationalPoint(Fraction(-u_v.a, -u_v.b), 1)


# ============================================================================
# Validation and type extraction
# ============================================================================

def validate_coral(c: TropicalCoral) -> ValidationReport:
    """Check the defining conditions of a tropical coral."""
    report = check_type(c.ctype)
    report.subject = "tropical coral"
    if report.has("endpoint") or report.has("missing") or report.has("non-primitive"):
        return report
    g = c.graph

    if any(v not in c.positions for v in g.vertex_ids):
        report.add("vertex position missing")
        return report

    for v in g.interior_vertices:
        if c.positions[v].h <= 1:
            report.add("interior vertex height")
    for v in g.negative_vertices:
        p = c.positions[v]
        u = c.ctype.negvert_dirs.get(v)
        if p.h != 1 or u is None or u.b >= 0 or forced_position(u) != p:
            report.add("negative vertex position")

    for e, (a, b) in g.bounded_edges:
        pa, pb = c.positions[a], c.positions[b]
        if pa == pb:
            report.add("edge direction")
            continue
        u, _ = direction_between(pa, pb)
        if u != c.ctype.flag_dirs[(a, e)]:
            report.add("edge direction")

    for v in g.negative_vertices:
        if v in c.ctype.negvert_dirs and solve_negative_weight(c.ctype, v) is None:
            report.add("negative balancing")

    logger.debug("validated coral with %d vertices: %s", len(g.vertex_ids), report.violations or "ok")
    return report


def require_valid(c: TropicalCoral) -> None:
    validate_coral(c).require(InvalidCoral)


def type_of(c: TropicalCoral) -> CoralType:
    """Directions read off the geometry of a valid coral."""
    require_valid(c)
    ray_dirs = {e: c.ctype.flag_dirs[(v, e)] for e, v in c.graph.positive_edges}
    return build_coral(c.graph, c.positions, ray_dirs).ctype


def degree_of(t: CoralType) -> Degree:
    g = t.graph
    positive = [g.weight(e) * t.positive_direction(e) for e in g.labels]
    negative = [t.negvert_weights[v] * t.negvert_dirs[v] for v in g.negative_vertices]
    return Degree(tuple(positive), tuple(negative))


def is_general(c) -> bool:
    """All interior vertices trivalent and all negative vertices univalent."""
    t = c.ctype if isinstance(c, TropicalCoral) else c
    return t.is_general()


# ============================================================================
# Rescaling and normal forms
# ============================================================================

def rescale(c: TropicalCoral, s) -> TropicalCoral:
    """Scale interior positions by s >= 1 keeping negative vertices fixed.

    Only univalent negative vertices stay on their ray under scaling; a
    multivalent one would change the type.
    """
    s = Fraction(s)
    if s < 1:
        raise BadScale(f"scale {s} is below 1")
    if s == 1:
        return c
    g = c.graph
    if any(g.valency(v) > 1 for v in g.negative_vertices):
        raise BadScale("rescaling a coral with a multivalent negative vertex changes its type")
    positions = {
        v: (p if g.vertex_class(v) == VertexClass.NEGATIVE else p.scale(s))
        for v, p in c.positions.items()
    }
    return TropicalCoral(c.ctype, positions)


def canonical_form(c: TropicalCoral) -> TropicalCoral:
    ctype, positions = canonicalize(c.ctype, c.positions)
    return TropicalCoral(ctype, positions)


def coral_key(c: TropicalCoral) -> tuple:
    return type_key(c.ctype, c.positions)


def integral_scale(c: TropicalCoral) -> int:
    """Smallest positive integer s making every interior position integral."""
    s = 1
    for v in c.graph.interior_vertices:
        p = c.positions[v]
        s = lcm(s, p.x.denominator, p.h.denominator)
    return s


def edge_length(c: TropicalCoral, e: int) -> Fraction:
    """Lattice length of a bounded edge."""
    a, b = c.graph.ends(e)
    return direction_between(c.positions[a], c.positions[b])[1]
