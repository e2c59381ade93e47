"""
Multiplicities and the tropical count.

Also holds the passage between corals and plane tropical curves: a coral
extends to a curve by prolonging its negative edges to rays through the
origin, and a curve matching a good constraint restricts back to a coral
after a possible rescaling.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Dict, List, Optional, Tuple, Union

from corals.core.errors import (
    BadConstraint,
    InvalidCoral,
    NonGeneralCoral,
    NotGoodPosition,
    NotTrivalent,
)
from corals.tropical.constraints import (
    Constraint,
    in_stable_range,
    is_general_constraint,
    is_good,
    stabilize,
)
from corals.tropical.coral import (
    Degree,
    TropicalCoral,
    build_coral,
    canonical_form,
    forced_position,
    require_valid,
    validate_coral,
)
from corals.tropical.coralgraph import CoralGraph, CoralType, EndKind, VertexClass, extend_graph
from corals.tropical.lattice import LatticeVector, RationalPoint, det2, pairing, primitive_of
from corals.tropical.moduli import check_degree, enumerate_types, realize

logger = logging.getLogger(__name__)


# ============================================================================
# Multiplicities
# ============================================================================

def mult_vertex(c: Union[TropicalCoral, CoralType], v: int, pair: Optional[Tuple[int, int]] = None) -> int:
    """w1*w2*|det(u1, u2)| for two edges at a trivalent interior vertex."""
    t = c.ctype if isinstance(c, TropicalCoral) else c
    g = t.graph
    if g.vertex_class(v) != VertexClass.INTERIOR or g.valency(v) != 3:
        raise NotTrivalent(f"vertex {v} is not a trivalent interior vertex")
    e1, e2 = pair if pair is not None else g.edges_at(v)[:2]
    return abs(det2(t.weighted(v, e1), t.weighted(v, e2)))


def mult_coral(c: Union[TropicalCoral, CoralType]) -> int:
    t = c.ctype if isinstance(c, TropicalCoral) else c
    if not t.is_general():
        raise NonGeneralCoral("multiplicity is defined for general corals only")
    m = 1
    for v in t.graph.interior_vertices:
        m *= mult_vertex(t, v)
    return m


def contribution(t: CoralType) -> Fraction:
    """Mult over the weights of the positive edges and of the edges at negative vertices."""
    g = t.graph
    value = Fraction(mult_coral(t))
    for e, _ in g.positive_edges:
        value /= g.weight(e)
    negatives = set(g.negative_vertices)
    for e, (a, b) in g.bounded_edges:
        if a in negatives or b in negatives:
            value /= g.weight(e)
    return value


@dataclass(frozen=True)
class TypeContribution:
    ctype: CoralType
    contribution: Fraction
    realized: bool
    coral: Optional[TropicalCoral] = None

    __hash__ = None


@dataclass(frozen=True)
class CountResult:
    """Tropical count of a degree at a constraint, with its per-type breakdown."""
    degree: Degree
    constraint: Constraint
    total: Fraction
    per_type: Tuple[TypeContribution, ...]
    scale: int = 1  # s0 when the constraint was stabilized first

    __hash__ = None


def count(d: Degree, lam: Constraint, auto_stabilize: bool = False) -> CountResult:
    """Sum of contributions over the general types realized at lam."""
    check_degree(d)
    if not is_good(lam, d):
        raise BadConstraint("constraint is not good for the degree", details={"reason": "not good"})
    catalog = enumerate_types(d)
    if not is_general_constraint(lam, d, catalog):
        raise BadConstraint("constraint is not general for the degree", details={"reason": "not general"})

    scale = 1
    cert = in_stable_range(lam, d, catalog)
    if not cert.stable:
        if not auto_stabilize:
            raise BadConstraint("constraint is not in the stable range", details=cert.to_dict())
        scale, lam = stabilize(lam, d, catalog)

    per_type: List[TypeContribution] = []
    total = Fraction(0)
    for t in catalog.types:
        c = realize(t, lam)
        if c is None:
            per_type.append(TypeContribution(t, Fraction(0), False))
            continue
        value = contribution(t)
        total += value
        per_type.append(TypeContribution(t, value, True, c))
        logger.debug("type realized with contribution %s", value)

    logger.info("count over %d types: %s (%d realized)", len(catalog.types), total,
                sum(1 for p in per_type if p.realized))
    return CountResult(d, lam, total, tuple(per_type), scale)


# ============================================================================
# Plane tropical curves
# ============================================================================

@dataclass(frozen=True)
class Ray:
    """Unbounded edge of a plane tropical curve."""
    id: int
    vertex: int
    direction: LatticeVector
    weight: int
    kind: EndKind
    label: int = -1  # label index for positive rays

    @property
    def negative(self) -> bool:
        return self.kind != EndKind.POSITIVE


@dataclass(frozen=True)
class TropicalCurve:
    vertices: Dict[int, RationalPoint]
    bounded_edges: Tuple[Tuple[int, Tuple[int, int]], ...]
    weights: Dict[int, int]
    rays: Tuple[Ray, ...]

    __hash__ = None

    def rays_at(self, v: int) -> List[Ray]:
        return [r for r in self.rays if r.vertex == v]

    def valency(self, v: int) -> int:
        bounded = sum(1 for _, pair in self.bounded_edges for end in pair if end == v)
        return bounded + len(self.rays_at(v))

    def flag_sum(self, v: int) -> Tuple[Fraction, Fraction]:
        """Weighted primitive directions summed at v; zero when balanced."""
        x = h = Fraction(0)
        p = self.vertices[v]
        for e, (a, b) in self.bounded_edges:
            if v not in (a, b):
                continue
            q = self.vertices[b if a == v else a]
            dx, dh = q.x - p.x, q.h - p.h
            u, _ = primitive_of(dx, dh)
            x += self.weights[e] * u.a
            h += self.weights[e] * u.b
        for r in self.rays_at(v):
            x += r.weight * r.direction.a
            h += r.weight * r.direction.b
        return x, h

    def degree(self) -> Degree:
        positive = sorted((r for r in self.rays if not r.negative), key=lambda r: r.label)
        negative = sorted(r.weight * r.direction for r in self.rays if r.negative)
        return Degree(tuple(r.weight * r.direction for r in positive), tuple(negative))


def extend_coral(c: TropicalCoral) -> TropicalCurve:
    """Prolong negative edges to rays through the origin."""
    require_valid(c)
    t = c.ctype
    g = c.graph
    ext = extend_graph(t)
    rays = []
    for h in ext.half_edges:
        if h.kind == EndKind.POSITIVE:
            direction = t.flag_dirs[(h.vertex, h.id)]
            rays.append(Ray(h.id, h.vertex, direction, h.weight, h.kind, g.label_index(h.id)))
        else:
            # univalent: ray leaves the interior neighbour along u_v; inserted: leaves v itself
            rays.append(Ray(h.id, h.vertex, t.negvert_dirs[h.origin], h.weight, h.kind))
    vertices = {v: c.positions[v] for v in ext.vertices}
    weights = {e: w for e, w in ext.weights.items() if any(e == be for be, _ in ext.bounded_edges)}
    logger.debug("extended coral to a curve with %d rays", len(rays))
    return TropicalCurve(vertices, ext.bounded_edges, weights, tuple(rays))


def _cone_slopes(d: Degree) -> Tuple[Fraction, Fraction]:
    slopes = [u.slope() for u in d.positive_primitives()]
    return min(slopes), max(slopes)


def _passes_origin(tc: TropicalCurve, r: Ray) -> bool:
    p = tc.vertices[r.vertex]
    return r.direction.b < 0 and p.h > 0 and pairing(r.direction, p) == 0


def _projects(tc: TropicalCurve, v: int) -> bool:
    """A divalent vertex carrying a negative ray collapses onto the boundary."""
    return tc.valency(v) == 2 and any(r.negative for r in tc.rays_at(v))


def minimal_scale(tc: TropicalCurve) -> int:
    """Smallest integer s >= 1 lifting every vertex into the truncated cone.

    Vertices carrying a ray inserted at a multivalent negative vertex may land
    on height 1; all others must end strictly above it.
    """
    s = 1
    for v, p in tc.vertices.items():
        if _projects(tc, v) or p.h <= 0:
            continue
        inserted = any(r.kind == EndKind.NEGATIVE_INSERTED for r in tc.rays_at(v))
        if inserted:
            need = ceil(1 / p.h)
        else:
            need = floor(1 / p.h) + 1
        s = max(s, need)
    return s


def restrict_curve(tc: TropicalCurve, d: Degree, lam: Constraint) -> TropicalCoral:
    """The coral whose extension is tc after the minimal rescale.

    The result matches s*lam for s = minimal_scale(tc).
    """
    if not tc.degree().same_multiset(d) or tc.degree().positive != d.positive:
        raise BadConstraint("curve degree differs from the given degree")
    for r in tc.rays:
        if r.negative and not _passes_origin(tc, r):
            raise BadConstraint(f"negative ray {r.id} does not run through the origin")
    positive = sorted((r for r in tc.rays if not r.negative), key=lambda r: r.label)
    for i, entry in enumerate(lam.entries):
        r = positive[i]
        if r.direction != entry.direction or pairing(r.direction, tc.vertices[r.vertex]) != entry.value:
            raise BadConstraint(f"positive ray {r.id} does not match constraint entry {i}")
    if not is_good(lam, d):
        raise BadConstraint("constraint is not good for the degree")

    lo, hi = _cone_slopes(d)
    for v, p in tc.vertices.items():
        if p.h <= 0 or not lo * p.h <= p.x <= hi * p.h:
            raise NotGoodPosition(f"vertex {v} at ({p.x}, {p.h}) lies outside the positive cone")

    s = minimal_scale(tc)
    if s > 1:
        logger.info("curve restricts to a coral after rescaling by %d", s)

    positions: Dict[int, RationalPoint] = {}
    classes: Dict[int, VertexClass] = {}
    negvert_weights: Dict[int, int] = {}
    bounded = list(tc.bounded_edges)
    weights = dict(tc.weights)
    next_vertex = max(tc.vertices) + 1

    for v, p in tc.vertices.items():
        negative_rays = [r for r in tc.rays_at(v) if r.negative]
        if _projects(tc, v):
            positions[v] = RationalPoint(p.x / p.h, 1)
            classes[v] = VertexClass.NEGATIVE
            negvert_weights[v] = negative_rays[0].weight
            continue
        q = p.scale(s)
        positions[v] = q
        classes[v] = VertexClass.INTERIOR
        for r in negative_rays:
            if r.kind == EndKind.NEGATIVE_INSERTED and q.h == 1:
                classes[v] = VertexClass.NEGATIVE
                negvert_weights[v] = r.weight
                continue
            # break the ray where it crosses height 1
            positions[next_vertex] = forced_position(r.direction)
            classes[next_vertex] = VertexClass.NEGATIVE
            negvert_weights[next_vertex] = r.weight
            bounded.append((r.id, (v, next_vertex)))
            weights[r.id] = r.weight
            next_vertex += 1

    for r in positive:
        weights[r.id] = r.weight
    graph = CoralGraph(
        vertices=sorted(classes.items()),
        positive_edges=[(r.id, r.vertex) for r in positive],
        bounded_edges=bounded,
        weights=weights,
        labels=[r.id for r in positive],
    )
    c = build_coral(graph, positions, {r.id: r.direction for r in positive}, negvert_weights)
    report = validate_coral(c)
    if not report.ok:
        raise InvalidCoral("restricted curve is not a coral: " + "; ".join(report.violations),
                           details=report.violations)
    return canonical_form(c)
