"""
Tropical Morse trees.

A Morse tree is a rooted ribbon tree with a decoration n_0, ..., n_d and a
map phi from its vertices to the real line. Edges are oriented toward the
root; the edge whose subtree holds leaves a..b (in ribbon order) carries the
acceleration n_b - n_{a-1}. Velocities start at zero on the leaves, grow
linearly along each edge and add up at interior vertices.

Corals of good type project to Morse trees. A negative vertex goes to its
boundary coordinate, a positive end to the slope of its direction and an
interior vertex to the slope u1/u2 of its edge toward the root, or to the
coordinate of its negative neighbour when it has one. The image depends on
the type only. An edge with weighted vector W = (K, -n) toward the root has
velocity K + n*phi.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from corals.core.errors import HeightsInfeasible, InvalidTMT, NotGoodType
from corals.core.validation import ValidationReport
from corals.tropical.coral import TropicalCoral, forced_position, require_valid, validate_coral
from corals.tropical.coralgraph import CoralGraph, CoralType, VertexClass, check_type
from corals.tropical.lattice import LatticeVector, angle_key, primitive, primitive_of, sign
from corals.tropical.linalg import solve2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MorseTree:
    """Decorated ribbon tree with its map to the real line."""
    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, Tuple[int, int]], ...]
    cyclic: Dict[int, Tuple[int, ...]]  # anticlockwise edge order at each vertex
    root: int
    decoration: Tuple[int, ...]
    phi: Dict[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        object.__setattr__(self, "edges", tuple((int(e), (int(p[0]), int(p[1]))) for e, p in self.edges))
        object.__setattr__(self, "cyclic", {int(v): tuple(int(e) for e in es) for v, es in self.cyclic.items()})
        object.__setattr__(self, "decoration", tuple(int(n) for n in self.decoration))
        object.__setattr__(self, "phi", {int(v): Fraction(p) for v, p in self.phi.items()})

    __hash__ = None

    def ends(self, e: int) -> Tuple[int, int]:
        return dict(self.edges)[e]

    def other_end(self, e: int, v: int) -> int:
        a, b = self.ends(e)
        return b if a == v else a

    def edges_at(self, v: int) -> List[int]:
        return sorted(e for e, pair in self.edges for end in pair if end == v)

    def valency(self, v: int) -> int:
        return len(self.edges_at(v))

    @property
    def externals(self) -> List[int]:
        return [v for v in self.vertices if self.valency(v) == 1]

    @property
    def internals(self) -> List[int]:
        return [v for v in self.vertices if self.valency(v) > 1]

    @property
    def root_edge(self) -> int:
        return self.edges_at(self.root)[0]


@dataclass(frozen=True)
class VelocityProfile:
    """Per-edge orientation, acceleration and velocities at tail and head."""
    orientation: Dict[int, Tuple[int, int]]  # edge -> (tail, head), head toward the root
    accelerations: Dict[int, int]
    displacement: Dict[int, Fraction]  # phi(head) - phi(tail)
    velocities: Dict[int, Tuple[Fraction, Fraction]]

    __hash__ = None

    @property
    def contracted(self) -> Set[int]:
        return {e for e, ell in self.displacement.items() if ell == 0}

    def vector(self, e: int, phi: Dict[int, Fraction]) -> Tuple[Fraction, int]:
        """Weighted edge vector (K, -n) toward the root; K is constant along the edge."""
        tail, _ = self.orientation[e]
        n = self.accelerations[e]
        return self.velocities[e][0] - n * phi[tail], -n


# ============================================================================
# Ribbon structure
# ============================================================================

def _structure(m: MorseTree) -> ValidationReport:
    report = ValidationReport("Morse tree")
    if len(set(m.vertices)) != len(m.vertices):
        report.add("duplicate vertex id")
    known = set(m.vertices)
    if any(v not in known for _, pair in m.edges for v in pair):
        report.add("edge endpoint is not a vertex")
        return report
    G = nx.MultiGraph()
    G.add_nodes_from(m.vertices)
    G.add_edges_from((a, b) for _, (a, b) in m.edges)
    if G.number_of_nodes() == 0 or not nx.is_tree(nx.Graph(G)) or G.number_of_edges() != len(m.vertices) - 1:
        report.add("not a tree")
        return report
    for v in m.vertices:
        if sorted(m.cyclic.get(v, ())) != m.edges_at(v):
            report.add("cyclic order does not list the edges at a vertex")
        if m.valency(v) == 2:
            report.add("divalent vertex")
        if v not in m.phi:
            report.add("phi missing")
    if m.root not in known or m.valency(m.root) != 1:
        report.add("root is not external")
    if not m.internals:
        report.add("no interior vertex")
    if len(m.decoration) != len(m.externals):
        report.add("decoration length differs from the number of external vertices")
    if len(set(m.decoration)) != len(m.decoration):
        report.add("decoration not distinct")
    return report


def _children(m: MorseTree, v: int, parent: Optional[int]) -> List[int]:
    order = list(m.cyclic[v])
    if parent is not None:
        i = order.index(parent)
        order = order[i + 1:] + order[:i]
    return order


def orientation(m: MorseTree) -> Dict[int, Tuple[int, int]]:
    """Each edge as (tail, head) with the head toward the root."""
    out = {}
    stack = [(m.root, None)]
    while stack:
        v, parent = stack.pop()
        for e in _children(m, v, parent):
            w = m.other_end(e, v)
            out[e] = (w, v)
            stack.append((w, e))
    return out


def leaf_order(m: MorseTree) -> List[int]:
    """External vertices other than the root, in ribbon order from the root."""
    leaves = []

    def visit(v: int, parent: Optional[int]) -> None:
        if parent is not None and m.valency(v) == 1:
            leaves.append(v)
            return
        for e in _children(m, v, parent):
            visit(m.other_end(e, v), e)

    visit(m.root, None)
    return leaves


def region_labels(m: MorseTree) -> Dict[int, Tuple[int, int]]:
    """External vertex -> (i, j), the two regions it separates."""
    leaves = leaf_order(m)
    labels = {v: (k, k + 1) for k, v in enumerate(leaves)}
    labels[m.root] = (0, len(leaves))
    return labels


def accelerations(m: MorseTree) -> Dict[int, int]:
    """n_e = n_b - n_{a-1} for the edge above leaves a..b."""
    n = m.decoration
    out: Dict[int, int] = {}
    counter = [0]

    def visit(v: int, parent: Optional[int]) -> Tuple[int, int]:
        if parent is not None and m.valency(v) == 1:
            counter[0] += 1
            span = (counter[0], counter[0])
        else:
            spans = [visit(m.other_end(e, v), e) for e in _children(m, v, parent)]
            span = (spans[0][0], spans[-1][1])
        if parent is not None:
            a, b = span
            out[parent] = n[b] - n[a - 1]
        return span

    visit(m.root, None)
    return out


def predicted_contractions(m: MorseTree) -> Set[int]:
    """Leaf edges with negative acceleration, and the root edge if its acceleration is positive."""
    acc = accelerations(m)
    out = {m.edges_at(v)[0] for v in leaf_order(m) if acc[m.edges_at(v)[0]] < 0}
    if acc[m.root_edge] > 0:
        out.add(m.root_edge)
    return out


# ============================================================================
# Validation
# ============================================================================

def validate_tmt(m: MorseTree) -> Tuple[ValidationReport, Optional[VelocityProfile]]:
    """Propagate velocities toward the root and check every Morse tree condition."""
    report = _structure(m)
    if not report.ok:
        return report, None

    orient = orientation(m)
    acc = accelerations(m)
    phi = m.phi
    externals = set(m.externals)

    for v in externals:
        e = m.edges_at(v)[0]
        if (acc[e] * phi[v]).denominator != 1:
            report.add("rationality")

    displacement = {e: phi[head] - phi[tail] for e, (tail, head) in orient.items()}
    velocities: Dict[int, Tuple[Fraction, Fraction]] = {}

    def visit(v: int, parent: Optional[int]) -> Fraction:
        # velocity arriving at v from below
        if parent is not None and v in externals:
            return Fraction(0)
        return sum((propagate(e, v) for e in _children(m, v, parent)), Fraction(0))

    def propagate(e: int, head: int) -> Fraction:
        tail = m.other_end(e, head)
        start = visit(tail, e)
        end = start + acc[e] * displacement[e]
        velocities[e] = (start, end)
        return end

    propagate(m.root_edge, m.root)
    if velocities[m.root_edge][1] != 0:
        report.add("root velocity nonzero (balancing fails)")

    for e, (tail, head) in orient.items():
        ell = displacement[e]
        v0, v1 = velocities[e]
        if ell == 0:
            if tail not in externals and head not in externals:
                report.add("contracted interior edge")
            if v0 != 0:
                report.add("velocity on contracted edge")
            continue
        if sign(v0) not in (0, sign(ell)) or sign(v1) not in (0, sign(ell)):
            report.add("velocity sign")

    profile = VelocityProfile(orient, acc, displacement, velocities)
    if profile.contracted != predicted_contractions(m):
        report.add("contraction law")

    logger.debug("validated Morse tree with decoration %s: %s", m.decoration, report.violations or "ok")
    return report, (profile if report.ok else None)


def require_valid_tmt(m: MorseTree) -> VelocityProfile:
    report, profile = validate_tmt(m)
    report.require(InvalidTMT)
    return profile


# ============================================================================
# Morse tree -> coral type
# ============================================================================

def tmt_to_type(m: MorseTree) -> CoralType:
    """The coral type a valid tree determines; ids are kept from the tree."""
    profile = require_valid_tmt(m)
    contracted = profile.contracted
    if not contracted:
        raise InvalidTMT("no contracted edge, so the tree has no negative vertex")

    externals = m.externals
    negatives = [v for v in externals if m.edges_at(v)[0] in contracted]
    positives = [v for v in externals if v not in negatives]
    leaves = leaf_order(m)
    labelled = [v for v in leaves if v in positives]
    if m.root in positives:
        labelled.append(m.root)

    flag_dirs: Dict[Tuple[int, int], LatticeVector] = {}
    weights: Dict[int, int] = {}
    for e, (tail, head) in profile.orientation.items():
        K, h = profile.vector(e, m.phi)
        W = LatticeVector(int(K), h)
        u, w = primitive(W)
        weights[e] = w
        if tail not in positives:
            flag_dirs[(tail, e)] = u
        if head not in positives:
            flag_dirs[(head, e)] = -u

    positive_edges = [(m.edges_at(v)[0], m.other_end(m.edges_at(v)[0], v)) for v in labelled]
    positive_ids = {e for e, _ in positive_edges}
    bounded = [(e, pair) for e, pair in m.edges if e not in positive_ids]
    vertices = [(v, VertexClass.INTERIOR) for v in m.internals]
    vertices += [(v, VertexClass.NEGATIVE) for v in negatives]

    graph = CoralGraph(vertices, positive_edges, bounded, weights, labels=[e for e, _ in positive_edges])
    negvert_dirs = {v: primitive_of(-m.phi[v], -1)[0] for v in negatives}
    negvert_weights = {v: weights[m.edges_at(v)[0]] for v in negatives}
    t = CoralType(graph, flag_dirs, negvert_dirs, negvert_weights)
    check_type(t).require(InvalidTMT)
    return t


# ============================================================================
# Lifting and projection
# ============================================================================

def _walk(t: CoralType, start: int) -> List[Tuple[int, int]]:
    """Interior vertices with the edge they are reached by, from the negative vertex `start`.

    Children are visited anticlockwise from the flag of the edge they were
    reached by.
    """
    g = t.graph
    (e0,) = g.edges_at(start)
    order: List[Tuple[int, int]] = []

    def visit(v: int, parent: int) -> None:
        order.append((v, parent))
        base = t.flag_dirs[(v, parent)]
        children = [e for e in g.edges_at(v) if e != parent and not g.is_positive(e)]
        children.sort(key=lambda e: angle_key(t.flag_dirs[(v, e)], base))
        for e in children:
            w = g.other_end(e, v)
            if g.vertex_class(w) == VertexClass.INTERIOR:
                visit(w, e)

    visit(g.other_end(e0, start), e0)
    return order


def _negative_neighbour(g: CoralGraph, v: int) -> Optional[int]:
    negatives = set(g.negative_vertices)
    for e in g.edges_at(v):
        if not g.is_positive(e) and g.other_end(e, v) in negatives:
            return g.other_end(e, v)
    return None


def _adjacent_to_negative(g: CoralGraph, v: int) -> bool:
    return _negative_neighbour(g, v) is not None


def _first_negative(g: CoralGraph, key: Dict[int, Fraction]) -> int:
    return min(g.negative_vertices, key=lambda v: (key[v], v))


def free_vertices(t: CoralType) -> List[int]:
    """Interior vertices placed by a height parameter, in walk order."""
    g = t.graph
    start = _first_negative(g, {v: forced_position(t.negvert_dirs[v]).x for v in g.negative_vertices})
    order = _walk(t, start)
    return [order[0][0]] + [v for v, _ in order[1:] if not _adjacent_to_negative(g, v)]


def lift_type(t: CoralType, heights: Sequence) -> TropicalCoral:
    """The coral of type t with the given height parameters.

    heights[0] places the interior neighbour of the first negative vertex on
    that vertex's ray. Walking outward, a vertex next to another negative
    vertex sits where the edge from its known neighbour crosses that
    vertex's ray; every other vertex takes the next height and sits on the
    edge from its known neighbour at that height.
    """
    g = t.graph
    if not g.negative_vertices or not g.interior_vertices:
        raise HeightsInfeasible("type has no interior vertex to place")
    if not is_good_type(t):
        raise NotGoodType("a flag direction is horizontal")
    heights = [Fraction(h) for h in heights]
    positions = {v: forced_position(t.negvert_dirs[v]) for v in g.negative_vertices}
    order = _walk(t, _first_negative(g, {v: p.x for v, p in positions.items()}))
    expected = 1 + sum(1 for v, _ in order[1:] if not _adjacent_to_negative(g, v))
    if len(heights) != expected:
        raise HeightsInfeasible(f"expected {expected} heights, got {len(heights)}")
    if any(h <= 1 for h in heights):
        raise HeightsInfeasible(f"heights {[str(h) for h in heights]} must all exceed 1")

    v0, e0 = order[0]
    start = g.other_end(e0, v0)
    positions[v0] = positions[start].scale(heights[0])

    remaining = iter(heights[1:])
    for v, e in order[1:]:
        a = g.other_end(e, v)
        P = positions[a]
        u = t.flag_dirs[(a, e)]
        n = _negative_neighbour(g, v)
        if n is not None:
            ray = positions[n]
            # P + s*u = h*ray
            sol = solve2(u.a, -ray.x, u.b, -1, -P.x, -P.h)
            if sol is None:
                raise HeightsInfeasible(f"edge {e} runs parallel to the ray of vertex {n}")
            s, h = sol
        else:
            h = next(remaining)
            s = (h - P.h) / u.b
        if s <= 0:
            raise HeightsInfeasible(f"vertex {v} is not reachable from vertex {a} along edge {e}")
        if h <= 1:
            raise HeightsInfeasible(f"vertex {v} would sit at height {h}")
        positions[v] = P.step(s, u)

    c = TropicalCoral(t, positions)
    report = validate_coral(c)
    if not report.ok:
        raise HeightsInfeasible("lifted positions do not form a coral: " + "; ".join(report.violations),
                                details=report.violations)
    return c


def lift_tmt(m: MorseTree, heights: Sequence) -> TropicalCoral:
    """A coral of the tree's type; every feasible choice of heights gives one.

    The number of heights is one more than the number of interior vertices
    not adjacent to a negative vertex (l - 1 for a general tree).
    """
    c = lift_type(tmt_to_type(m), heights)
    logger.debug("lifted Morse tree to a coral with %d interior vertices", len(c.graph.interior_vertices))
    return c


def is_good_type(t: CoralType) -> bool:
    return all(u.b != 0 for u in t.flag_dirs.values()) and all(u.b != 0 for u in t.negvert_dirs.values())


def height_parameters(c: TropicalCoral) -> List[Fraction]:
    """The heights lift_tmt needs to rebuild c from its Morse tree."""
    if not is_good_type(c.ctype):
        raise NotGoodType("a flag direction is horizontal")
    return [c.positions[v].h for v in free_vertices(c.ctype)]


def canonical_tree(m: MorseTree) -> MorseTree:
    """Relabel in preorder from the root; cyclic lists start with the parent edge."""
    vmap: Dict[int, int] = {}
    emap: Dict[int, int] = {}
    cyclic: Dict[int, Tuple[int, ...]] = {}

    def visit(v: int, parent: Optional[int]) -> None:
        vmap[v] = len(vmap)
        children = _children(m, v, parent)
        for e in children:
            emap[e] = len(emap)
            visit(m.other_end(e, v), e)
        order = children if parent is None else [parent] + children
        cyclic[vmap[v]] = tuple(emap[e] for e in order)

    visit(m.root, None)
    return MorseTree(
        vertices=tuple(sorted(vmap.values())),
        edges=tuple(sorted((emap[e], tuple(sorted((vmap[a], vmap[b])))) for e, (a, b) in m.edges)),
        cyclic=cyclic,
        root=0,
        decoration=m.decoration,
        phi={vmap[v]: p for v, p in m.phi.items()},
    )


def coral_to_tmt(c: TropicalCoral, root: Optional[int] = None, root_end: Optional[int] = None) -> MorseTree:
    """Project a general coral of good type onto its Morse tree.

    The root is a negative vertex id or, through root_end, the positive edge
    whose end becomes the root. By default it is the negative vertex with the
    smallest boundary coordinate. Corals of one type share their tree.
    """
    require_valid(c)
    t = c.ctype
    g = c.graph
    if not t.is_general():
        raise NotGoodType("only general corals project to Morse trees")
    if not is_good_type(t):
        raise NotGoodType("a flag direction is horizontal")
    if root is not None and root_end is not None:
        raise InvalidTMT("give a root vertex or a root end, not both")

    base = max(g.vertex_ids) + 1
    end_vertex = {e: base + i for i, e in enumerate(g.labels)}
    if root_end is not None:
        if root_end not in end_vertex:
            raise InvalidTMT(f"edge {root_end} is not a positive edge")
        root_id = end_vertex[root_end]
    else:
        if root is None:
            root = _first_negative(g, {v: c.positions[v].x for v in g.negative_vertices})
        if root not in g.negative_vertices:
            raise InvalidTMT(f"vertex {root} is not a negative vertex")
        root_id = root

    edges = list(g.bounded_edges) + [(e, (g.ends(e)[0], w)) for e, w in end_vertex.items()]
    cyclic = {}
    east = LatticeVector(1, 0)
    for v in g.vertex_ids:
        cyclic[v] = tuple(sorted(g.edges_at(v), key=lambda e: angle_key(t.flag_dirs[(v, e)], east)))
    for e, w in end_vertex.items():
        cyclic[w] = (e,)

    ribbon = MorseTree(tuple(g.vertex_ids) + tuple(end_vertex.values()), tuple(edges), cyclic, root_id,
                       tuple(range(len(end_vertex) + len(g.negative_vertices))), {})
    orient = orientation(ribbon)
    outgoing = {tail: e for e, (tail, _) in orient.items()}

    phi: Dict[int, Fraction] = {v: c.positions[v].x for v in g.negative_vertices}
    for v in g.interior_vertices:
        n = _negative_neighbour(g, v)
        if n is not None:
            # the edge to a negative vertex is contracted
            phi[v] = phi[n]
        else:
            phi[v] = t.flag_dirs[(v, outgoing[v])].slope()
    for e, w in end_vertex.items():
        phi[w] = t.positive_direction(e).slope()

    # n_e = -(height of the weighted edge vector toward the root)
    acc = {}
    for e, (tail, head) in orient.items():
        if tail in end_vertex.values():
            u = -t.positive_direction(e)
        else:
            u = t.flag_dirs[(tail, e)]
        acc[e] = -g.weight(e) * u.b
    decoration = [0]
    for leaf in leaf_order(ribbon):
        decoration.append(decoration[-1] + acc[ribbon.edges_at(leaf)[0]])

    m = canonical_tree(MorseTree(ribbon.vertices, ribbon.edges, cyclic, root_id, tuple(decoration), phi))
    require_valid_tmt(m)
    return m
