"""
Coral graphs and coral types.

A coral graph is a tree whose vertices are either interior or negative
(sitting on the height-1 boundary), with positive half-edges running off to
infinity. A coral type decorates every flag and every negative vertex with a
primitive direction. Ids are opaque non-negative integers; every canonical
ordering in this package is derived from geometry and labels, never from ids.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

import networkx as nx

from corals.core.errors import InvalidGraph
from corals.core.validation import ValidationReport
from corals.tropical.lattice import LatticeVector, RationalPoint, is_primitive, parallel

logger = logging.getLogger(__name__)

Flag = Tuple[int, int]  # (vertex id, edge id)


class VertexClass(str, Enum):
    """Vertex classes of a coral graph."""
    INTERIOR = "interior"
    NEGATIVE = "negative"


class EndKind(str, Enum):
    """Unbounded edges of an extended graph."""
    POSITIVE = "positive"
    NEGATIVE_UNIVALENT = "negative_univalent"  # former univalent negative vertex
    NEGATIVE_INSERTED = "negative_inserted"  # ray added at a multivalent negative vertex


# ============================================================================
# Coral graphs
# ============================================================================

@dataclass(frozen=True)
class CoralGraph:
    """Bilateral tree with positive half-edges and k-labelling.

    `labels` lists every positive edge once; label i is matched against
    constraint entry i and the final entry is the unlabelled end.
    """
    vertices: Tuple[Tuple[int, VertexClass], ...]
    positive_edges: Tuple[Tuple[int, int], ...]
    bounded_edges: Tuple[Tuple[int, Tuple[int, int]], ...]
    weights: Dict[int, int]
    labels: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((int(v), VertexClass(c)) for v, c in self.vertices))
        object.__setattr__(self, "positive_edges", tuple((int(e), int(v)) for e, v in self.positive_edges))
        object.__setattr__(self, "bounded_edges",
                           tuple((int(e), (int(p[0]), int(p[1]))) for e, p in self.bounded_edges))
        object.__setattr__(self, "weights", {int(e): int(w) for e, w in dict(self.weights).items()})
        object.__setattr__(self, "labels", tuple(int(e) for e in self.labels))

    __hash__ = None

    # -- lookups ------------------------------------------------------------

    @property
    def vertex_ids(self) -> List[int]:
        return sorted(v for v, _ in self.vertices)

    def vertex_class(self, v: int) -> VertexClass:
        for vid, cls in self.vertices:
            if vid == v:
                return cls
        raise KeyError(v)

    @property
    def interior_vertices(self) -> List[int]:
        return sorted(v for v, c in self.vertices if c == VertexClass.INTERIOR)

    @property
    def negative_vertices(self) -> List[int]:
        return sorted(v for v, c in self.vertices if c == VertexClass.NEGATIVE)

    @property
    def l(self) -> int:
        return len(self.positive_edges)

    @property
    def m(self) -> int:
        return len(self.negative_vertices)

    @property
    def edge_ids(self) -> List[int]:
        return sorted([e for e, _ in self.positive_edges] + [e for e, _ in self.bounded_edges])

    def is_positive(self, e: int) -> bool:
        return any(pe == e for pe, _ in self.positive_edges)

    def ends(self, e: int) -> Tuple[int, ...]:
        for pe, v in self.positive_edges:
            if pe == e:
                return (v,)
        for be, pair in self.bounded_edges:
            if be == e:
                return pair
        raise KeyError(e)

    def other_end(self, e: int, v: int) -> int:
        a, b = self.ends(e)
        return b if a == v else a

    def edges_at(self, v: int) -> List[int]:
        out = [e for e, w in self.positive_edges if w == v]
        out += [e for e, pair in self.bounded_edges for end in pair if end == v]
        return sorted(out)

    def valency(self, v: int) -> int:
        return len(self.edges_at(v))

    def weight(self, e: int) -> int:
        return self.weights[e]

    def flags(self) -> List[Flag]:
        out = [(v, e) for e, v in self.positive_edges]
        for e, (a, b) in self.bounded_edges:
            out += [(a, e), (b, e)]
        return sorted(out)

    def label_index(self, e: int) -> int:
        return self.labels.index(e) if e in self.labels else -1

    def to_networkx(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from(v for v, _ in self.vertices)
        for e, (a, b) in self.bounded_edges:
            G.add_edge(a, b, key=e)
        return G


def validate_graph(g: CoralGraph) -> ValidationReport:
    """Check the coral graph conditions; the report lists every violation."""
    report = ValidationReport("coral graph")
    ids = [v for v, _ in g.vertices]
    if len(set(ids)) != len(ids):
        report.add("duplicate vertex id")
    edge_ids = [e for e, _ in g.positive_edges] + [e for e, _ in g.bounded_edges]
    if len(set(edge_ids)) != len(edge_ids):
        report.add("duplicate edge id")

    known = set(ids)
    endpoints = [v for _, v in g.positive_edges] + [x for _, pair in g.bounded_edges for x in pair]
    if any(v not in known for v in endpoints):
        report.add("edge endpoint is not a vertex")
        return report

    if not g.negative_vertices:
        report.add("no negative vertex")
    if not g.positive_edges:
        report.add("no positive edge")
    if any(g.weights.get(e, 0) < 1 for e in edge_ids):
        report.add("edge weight missing or below 1")
    if sorted(g.labels) != sorted(e for e, _ in g.positive_edges):
        report.add("labels must list every positive edge exactly once")

    G = g.to_networkx()
    if G.number_of_nodes() > 0:
        components = nx.number_connected_components(G)
        betti = G.number_of_edges() - G.number_of_nodes() + components
        if betti > 0:
            report.add("Betti number nonzero")
        if components > 1:
            report.add("graph not connected")

    for v, cls in g.vertices:
        val = g.valency(v)
        if val == 0:
            report.add("isolated vertex")
        elif cls == VertexClass.INTERIOR and val == 1:
            report.add("univalent interior vertex")
        elif cls == VertexClass.INTERIOR and val == 2:
            report.add("divalent vertex")
    return report


# ============================================================================
# Coral types
# ============================================================================

@dataclass(frozen=True)
class CoralType:
    """A coral graph with primitive directions on flags and negative vertices."""
    graph: CoralGraph
    flag_dirs: Dict[Flag, LatticeVector]
    negvert_dirs: Dict[int, LatticeVector]
    negvert_weights: Dict[int, int] = field(default_factory=dict)

    __hash__ = None

    def direction(self, v: int, e: int) -> LatticeVector:
        return self.flag_dirs[(v, e)]

    def weighted(self, v: int, e: int) -> LatticeVector:
        return self.graph.weight(e) * self.flag_dirs[(v, e)]

    def positive_direction(self, e: int) -> LatticeVector:
        (v,) = self.graph.ends(e)
        return self.flag_dirs[(v, e)]

    def label_directions(self) -> List[LatticeVector]:
        return [self.positive_direction(e) for e in self.graph.labels]

    def flag_sum(self, v: int) -> LatticeVector:
        total = LatticeVector(0, 0)
        for e in self.graph.edges_at(v):
            total = total + self.weighted(v, e)
        return total

    def negative_weighted(self, v: int) -> LatticeVector:
        return self.negvert_weights[v] * self.negvert_dirs[v]

    def is_general(self) -> bool:
        g = self.graph
        return (all(g.valency(v) == 3 for v in g.interior_vertices)
                and all(g.valency(v) == 1 for v in g.negative_vertices))


def check_type(t: CoralType) -> ValidationReport:
    """Direction-level consistency: primitivity, balancing, properness, germs."""
    report = validate_graph(t.graph)
    report.subject = "coral type"
    if not report.ok and report.has("endpoint"):
        return report
    g = t.graph

    for flag in g.flags():
        u = t.flag_dirs.get(flag)
        if u is None:
            report.add("flag direction missing")
        elif u.is_zero() or not is_primitive(u):
            report.add("non-primitive direction")
    if not report.ok and (report.has("missing") or report.has("non-primitive")):
        return report

    for e, (a, b) in g.bounded_edges:
        if t.flag_dirs[(a, e)] != -t.flag_dirs[(b, e)]:
            report.add("bounded edge flags are not opposite")
    for e, v in g.positive_edges:
        if t.flag_dirs[(v, e)].b <= 0:
            report.add("properness")

    for v in g.interior_vertices:
        if not t.flag_sum(v).is_zero():
            report.add("interior balancing")
    for v in g.negative_vertices:
        u = t.negvert_dirs.get(v)
        w = t.negvert_weights.get(v)
        if u is None or u.is_zero() or not is_primitive(u) or u.b >= 0:
            report.add("negative vertex direction")
            continue
        if w is None or w < 1 or not (w * u + t.flag_sum(v)).is_zero():
            report.add("negative balancing")

    for v in g.vertex_ids:
        dirs = [t.flag_dirs[(v, e)] for e in g.edges_at(v)]
        if len(set(dirs)) != len(dirs):
            report.add("overlapping edge germs")
    return report


def solve_negative_weight(t: CoralType, v: int) -> Optional[int]:
    """The positive integer w_v with w_v*u_v = -(sum of weighted flags), if any."""
    u = t.negvert_dirs[v]
    s = -t.flag_sum(v)
    if not parallel(u, s) or s.is_zero():
        return None
    w = Fraction(s.a, u.a) if u.a != 0 else Fraction(s.b, u.b)
    if w <= 0 or w.denominator != 1:
        return None
    return int(w)


# ============================================================================
# Canonical encodings
# ============================================================================

def _vertex_key(t: CoralType, v: int, parent: Optional[int],
                positions: Optional[Mapping[int, RationalPoint]], memo: dict) -> tuple:
    if (v, parent) in memo:
        return memo[(v, parent)]
    g = t.graph
    children = []
    for e in g.edges_at(v):
        if e == parent:
            continue
        u = t.flag_dirs[(v, e)]
        head = (u.a, u.b, g.weight(e), g.label_index(e))
        if g.is_positive(e):
            children.append((0,) + head + ((),))
        else:
            children.append((1,) + head + (_vertex_key(t, g.other_end(e, v), e, positions, memo),))
    children.sort()
    if g.vertex_class(v) == VertexClass.NEGATIVE:
        n = t.negvert_dirs[v]
        node = (1, (n.a, n.b, t.negvert_weights.get(v, 0)))
    else:
        node = (0, ())
    pos = (positions[v].x, positions[v].h) if positions is not None else ()
    key = node + (pos, tuple(children))
    memo[(v, parent)] = key
    return key


def type_key(t: CoralType, positions: Optional[Mapping[int, RationalPoint]] = None) -> tuple:
    """Isomorphism invariant of a type (or of a coral when positions are given)."""
    memo: dict = {}
    return min(_vertex_key(t, r, None, positions, memo) for r in t.graph.negative_vertices)


def canonicalize(t: CoralType, positions: Optional[Mapping[int, RationalPoint]] = None):
    """Relabel ids deterministically.

    Roots at the negative vertex with the smallest encoding and numbers
    vertices and edges in preorder with children sorted by their encoding.
    Returns (type, positions or None).
    """
    g = t.graph
    memo: dict = {}
    root = min(g.negative_vertices, key=lambda r: _vertex_key(t, r, None, positions, memo))

    vmap: Dict[int, int] = {}
    emap: Dict[int, int] = {}

    def visit(v: int, parent: Optional[int]) -> None:
        vmap[v] = len(vmap)
        children = []
        for e in g.edges_at(v):
            if e == parent:
                continue
            u = t.flag_dirs[(v, e)]
            head = (u.a, u.b, g.weight(e), g.label_index(e))
            if g.is_positive(e):
                children.append(((0,) + head + ((),), e, None))
            else:
                w = g.other_end(e, v)
                children.append(((1,) + head + (_vertex_key(t, w, e, positions, memo),), e, w))
        children.sort(key=lambda c: c[0])
        for _, e, w in children:
            emap[e] = len(emap)
            if w is not None:
                visit(w, e)

    visit(root, None)

    graph = CoralGraph(
        vertices=sorted((vmap[v], c) for v, c in g.vertices),
        positive_edges=sorted((emap[e], vmap[v]) for e, v in g.positive_edges),
        bounded_edges=sorted((emap[e], tuple(sorted((vmap[a], vmap[b])))) for e, (a, b) in g.bounded_edges),
        weights={emap[e]: w for e, w in g.weights.items()},
        labels=[emap[e] for e in g.labels],
    )
    ctype = CoralType(
        graph=graph,
        flag_dirs={(vmap[v], emap[e]): u for (v, e), u in t.flag_dirs.items()},
        negvert_dirs={vmap[v]: u for v, u in t.negvert_dirs.items()},
        negvert_weights={vmap[v]: w for v, w in t.negvert_weights.items()},
    )
    new_positions = None
    if positions is not None:
        new_positions = {vmap[v]: p for v, p in positions.items()}
    return ctype, new_positions


def canonical_type(t: CoralType) -> CoralType:
    return canonicalize(t)[0]


# ============================================================================
# Extension of the graph
# ============================================================================

@dataclass(frozen=True)
class HalfEdge:
    """Unbounded edge of an extended graph."""
    id: int
    vertex: int
    kind: EndKind
    weight: int
    origin: int  # positive edge id, or the negative vertex it replaces / sits at


@dataclass(frozen=True)
class ExtendedGraph:
    """Coral graph with univalent negative vertices removed and rays inserted."""
    vertices: Tuple[int, ...]
    bounded_edges: Tuple[Tuple[int, Tuple[int, int]], ...]
    half_edges: Tuple[HalfEdge, ...]
    weights: Dict[int, int]

    __hash__ = None

    @property
    def unbounded_count(self) -> int:
        return len(self.half_edges)

    def betti_number(self) -> int:
        G = nx.MultiGraph()
        G.add_nodes_from(self.vertices)
        for e, (a, b) in self.bounded_edges:
            G.add_edge(a, b, key=e)
        return G.number_of_edges() - G.number_of_nodes() + nx.number_connected_components(G)


def extend_graph(g: Union[CoralGraph, CoralType],
                 negvert_weights: Optional[Mapping[int, int]] = None) -> ExtendedGraph:
    """Remove univalent negative vertices and insert rays at the others.

    Inserted rays carry w_v, which lives on the type; pass a CoralType or
    the weights explicitly when a negative vertex is multivalent.
    """
    if isinstance(g, CoralType):
        negvert_weights = g.negvert_weights
        g = g.graph
    validate_graph(g).require(InvalidGraph)
    negvert_weights = dict(negvert_weights or {})

    next_id = max(g.edge_ids) + 1
    removed = set()
    half_edges: List[HalfEdge] = [
        HalfEdge(e, v, EndKind.POSITIVE, g.weight(e), e) for e, v in g.positive_edges
    ]
    bounded = dict(g.bounded_edges)

    for v in g.negative_vertices:
        edges = g.edges_at(v)
        if len(edges) == 1 and not g.is_positive(edges[0]):
            e = edges[0]
            removed.add(v)
            del bounded[e]
            half_edges.append(HalfEdge(e, g.other_end(e, v), EndKind.NEGATIVE_UNIVALENT, g.weight(e), v))
            continue
        if v in negvert_weights:
            w = negvert_weights[v]
        elif len(edges) == 1:
            # lone negative vertex carrying a single positive edge
            w = g.weight(edges[0])
        else:
            raise InvalidGraph(f"negative vertex {v} is multivalent but its weight w_v is unknown")
        half_edges.append(HalfEdge(next_id, v, EndKind.NEGATIVE_INSERTED, w, v))
        next_id += 1

    weights = {e: w for e, w in g.weights.items() if e in bounded}
    weights.update({h.id: h.weight for h in half_edges})
    logger.debug("extended graph: removed %d negative vertices, %d unbounded edges",
                 len(removed), len(half_edges))
    return ExtendedGraph(
        vertices=tuple(v for v in g.vertex_ids if v not in removed),
        bounded_edges=tuple(sorted(bounded.items())),
        half_edges=tuple(sorted(half_edges, key=lambda h: h.id)),
        weights=weights,
    )
