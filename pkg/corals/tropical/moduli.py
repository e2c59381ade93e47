"""
Types of a degree and their realizations.

Types are enumerated from leaf-labelled trivalent trees on the l + m ends of
a degree, propagating weighted directions through internal edges by
balancing. A type is realized against a constraint by solving the affine
system in the interior positions and the bounded edge lengths exactly.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Iterator, List, Optional, Sequence, Tuple

from corals.core.config import settings
from corals.core.errors import (
    BadIndex,
    DirectionMismatch,
    EmptyDegree,
    InvalidDegree,
    NonGeneralType,
    SolverInconsistency,
)
from corals.tropical import linalg
from corals.tropical.coral import Degree, TropicalCoral, forced_position
from corals.tropical.coralgraph import (
    CoralGraph,
    CoralType,
    VertexClass,
    canonical_type,
    check_type,
    solve_negative_weight,
    type_key,
)
from corals.tropical.lattice import LatticeVector, QuotientClass, RationalPoint, primitive, project_mod

if TYPE_CHECKING:
    from corals.tropical.constraints import Constraint

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TypeCatalog:
    """All types of a degree, canonical and deduplicated."""
    degree: Degree
    types: Tuple[CoralType, ...]

    def __len__(self) -> int:
        return len(self.types)


# ============================================================================
# Enumeration
# ============================================================================

def binary_trees(n: int) -> Iterator[List[Tuple[int, int]]]:
    """Unrooted binary trees with leaves 0..n-1 and internal nodes n, n+1, ...

    Leaf i is inserted on every edge of each tree on leaves 0..i-1, which
    yields each tree exactly once.
    """
    if n < 3:
        raise ValueError("binary trees need at least three leaves")

    def grow(edges: List[Tuple[int, int]], leaf: int, next_node: int):
        if leaf == n:
            yield edges
            return
        for idx, (a, b) in enumerate(edges):
            x = next_node
            new_edges = edges[:idx] + edges[idx + 1:] + [(a, x), (x, b), (leaf, x)]
            yield from grow(new_edges, leaf + 1, next_node + 1)

    yield from grow([(0, n), (1, n), (2, n)], 3, n + 1)


def _end_vectors(d: Degree) -> List[LatticeVector]:
    """Outward weighted vectors of the ends: positive entries, then negative ones."""
    return list(d.positive) + list(d.negative)


def _tree_type(d: Degree, edges: Sequence[Tuple[int, int]]) -> Optional[CoralType]:
    l, m = d.l, d.m
    n = l + m
    vectors = _end_vectors(d)
    nbrs: Dict[int, List[int]] = {}
    for a, b in edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)

    memo: Dict[Tuple[int, int], LatticeVector] = {}

    def flow(a: int, b: int) -> LatticeVector:
        # sum of the end vectors on b's side of the edge a-b
        if (a, b) not in memo:
            if b < n:
                memo[(a, b)] = vectors[b]
            else:
                total = LatticeVector(0, 0)
                for c in nbrs[b]:
                    if c != a:
                        total = total + flow(b, c)
                memo[(a, b)] = total
        return memo[(a, b)]

    internal = sorted(x for x in nbrs if x >= n)
    flag_dirs = {}
    weights = {}
    bounded = []
    positive = []
    next_edge = n
    for a, b in sorted(edges):
        x, y = (a, b) if a >= n else (b, a)  # x is internal
        W = flow(x, y)
        if W.is_zero():
            return None
        u, w = primitive(W)
        if y < l:
            e = y
            positive.append((e, x))
        else:
            e = next_edge
            next_edge += 1
            bounded.append((e, (x, y)))
            flag_dirs[(y, e)] = -u
        flag_dirs[(x, e)] = u
        weights[e] = w

    vertices = [(x, VertexClass.INTERIOR) for x in internal]
    vertices += [(l + j, VertexClass.NEGATIVE) for j in range(m)]
    negvert_dirs, negvert_weights = {}, {}
    for j in range(m):
        u, w = primitive(d.negative[j])
        negvert_dirs[l + j] = u
        negvert_weights[l + j] = w

    graph = CoralGraph(vertices, positive, bounded, weights, labels=list(range(l)))
    t = CoralType(graph, flag_dirs, negvert_dirs, negvert_weights)
    if check_type(t).has("overlapping edge germs"):
        return None
    return t


def _two_end_type(d: Degree) -> CoralType:
    """l = m = 1: a lone negative vertex carrying the positive edge."""
    u, w = primitive(d.positive[0])
    nu, nw = primitive(d.negative[0])
    graph = CoralGraph([(0, VertexClass.NEGATIVE)], [(0, 0)], [], {0: w}, labels=[0])
    return CoralType(graph, {(0, 0): u}, {0: nu}, {0: nw})


def _contract(t: CoralType, edges: Sequence[int]) -> Optional[CoralType]:
    g = t.graph
    parent = {v: v for v in g.vertex_ids}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for e in edges:
        a, b = g.ends(e)
        ra, rb = find(a), find(b)
        negatives = [r for r in (ra, rb) if g.vertex_class(r) == VertexClass.NEGATIVE]
        if len(negatives) == 2:
            return None
        # a negative vertex absorbs the component
        keep, drop = (rb, ra) if negatives == [rb] else (ra, rb)
        parent[drop] = keep

    dropped = set(edges)
    rep = {v: find(v) for v in g.vertex_ids}
    vertices = sorted({(rep[v], g.vertex_class(rep[v])) for v in g.vertex_ids})
    positive = [(e, rep[v]) for e, v in g.positive_edges]
    bounded = [(e, (rep[a], rep[b])) for e, (a, b) in g.bounded_edges if e not in dropped]
    weights = {e: w for e, w in g.weights.items() if e not in dropped}
    flag_dirs = {(rep[v], e): u for (v, e), u in t.flag_dirs.items() if e not in dropped}
    negvert_dirs = {v: u for v, u in t.negvert_dirs.items()}
    graph = CoralGraph(vertices, positive, bounded, weights, g.labels)
    contracted = CoralType(graph, flag_dirs, negvert_dirs, dict(t.negvert_weights))

    negvert_weights = {}
    for v in graph.negative_vertices:
        w = solve_negative_weight(contracted, v)
        if w is None:
            return None
        negvert_weights[v] = w
    contracted = CoralType(graph, flag_dirs, negvert_dirs, negvert_weights)
    if not check_type(contracted).ok:
        return None
    return contracted


def _degenerations(t: CoralType) -> Iterator[CoralType]:
    bounded = [e for e, _ in t.graph.bounded_edges]
    for mask in range(1, 1 << len(bounded)):
        chosen = [e for i, e in enumerate(bounded) if mask >> i & 1]
        contracted = _contract(t, chosen)
        if contracted is not None:
            yield contracted


def check_degree(d: Degree) -> None:
    if d.l < 1 or d.m < 1:
        raise EmptyDegree(f"degree needs positive and negative entries, got l={d.l}, m={d.m}")
    d.check().require(InvalidDegree)


def enumerate_types(d: Degree, general_only: bool = True) -> TypeCatalog:
    """Every type of degree d, deduplicated by canonical form."""
    check_degree(d)
    n = d.l + d.m
    if n > settings.max_enumeration_ends:
        logger.warning("enumerating types over %d ends; this may take a while", n)

    found: Dict[tuple, CoralType] = {}

    def add(t: CoralType) -> None:
        key = type_key(t)
        if key not in found:
            found[key] = canonical_type(t)

    general: List[CoralType] = []
    if n == 2:
        general.append(_two_end_type(d))
    else:
        for edges in binary_trees(n):
            t = _tree_type(d, edges)
            if t is not None:
                general.append(t)
    for t in general:
        add(t)
    if not general_only:
        for t in general:
            for degenerate in _degenerations(t):
                add(degenerate)

    types = tuple(found[k] for k in sorted(found))
    logger.info("degree with l=%d, m=%d has %d %stypes", d.l, d.m, len(types),
                "general " if general_only else "")
    return TypeCatalog(d, types)


# ============================================================================
# Linear system of a type
# ============================================================================

@dataclass
class TypeSystem:
    """A x = b0 + s*b1 in interior positions and bounded edge lengths."""
    ctype: CoralType
    interior: List[int]
    edges: List[int]
    A: List[List[Fraction]]
    b0: List[Fraction]
    b1: List[Fraction]
    edge_rows: int

    @property
    def nvars(self) -> int:
        return 2 * len(self.interior) + len(self.edges)

    def x(self, v: int) -> int:
        return 2 * self.interior.index(v)

    def h(self, v: int) -> int:
        return 2 * self.interior.index(v) + 1

    def length(self, e: int) -> int:
        return 2 * len(self.interior) + self.edges.index(e)


def negative_positions(t: CoralType) -> Dict[int, RationalPoint]:
    return {v: forced_position(t.negvert_dirs[v]) for v in t.graph.negative_vertices}


def check_constraint_directions(t: CoralType, lam: "Constraint") -> None:
    g = t.graph
    if len(lam.entries) > len(g.labels):
        raise DirectionMismatch(f"{len(lam.entries)} constraint entries for {len(g.labels)} positive edges")
    for i, entry in enumerate(lam.entries):
        u = t.positive_direction(g.labels[i])
        if entry.direction != u:
            raise DirectionMismatch(f"entry {i} has direction {entry.direction}, labelled edge has {u}")


def build_system(t: CoralType, lam: "Constraint") -> TypeSystem:
    g = t.graph
    interior = g.interior_vertices
    edges = [e for e, _ in g.bounded_edges]
    fixed = negative_positions(t)
    system = TypeSystem(t, interior, edges, [], [], [], 0)
    nvars = system.nvars

    def coord(v: int, axis: int, row: List[Fraction], sign: int) -> Fraction:
        # adds the variable for v's coordinate, or returns its constant
        if v in fixed:
            p = fixed[v]
            return sign * (p.x if axis == 0 else p.h)
        row[system.x(v) + axis] += sign
        return Fraction(0)

    for e, (a, b) in g.bounded_edges:
        u = t.flag_dirs[(a, e)]
        for axis, comp in ((0, u.a), (1, u.b)):
            row = [Fraction(0)] * nvars
            const = coord(b, axis, row, 1) + coord(a, axis, row, -1)
            row[system.length(e)] = Fraction(-comp)
            system.A.append(row)
            system.b0.append(-const)
            system.b1.append(Fraction(0))
    system.edge_rows = len(system.A)

    for i, entry in enumerate(lam.entries):
        e = g.labels[i]
        (v,) = g.ends(e)
        u = entry.direction
        row = [Fraction(0)] * nvars
        if v in fixed:
            const = u.a * fixed[v].h - u.b * fixed[v].x
        else:
            row[system.x(v)] = Fraction(-u.b)
            row[system.h(v)] = Fraction(u.a)
            const = Fraction(0)
        system.A.append(row)
        system.b0.append(-const)
        system.b1.append(entry.value)
    return system


def moduli_dimension(t: CoralType) -> int:
    """Dimension of the solution space before constraints are imposed."""
    system = build_system(t, _EMPTY)
    return system.nvars - linalg.rank(system.A, system.nvars)


@dataclass
class ParametricSolution:
    """Unique solution x(s) = base + s*slope, possibly valid only at s = fixed_s."""
    system: TypeSystem
    base: List[Fraction]
    slope: List[Fraction]
    fixed_s: Optional[Fraction] = None

    def values(self, s=1) -> List[Fraction]:
        s = Fraction(s)
        return [a + s * b for a, b in zip(self.base, self.slope)]

    def valid_at(self, s) -> bool:
        return self.fixed_s is None or self.fixed_s == s

    def lengths(self, s=1) -> Dict[int, Fraction]:
        x = self.values(s)
        return {e: x[self.system.length(e)] for e in self.system.edges}

    def heights(self, s=1) -> Dict[int, Fraction]:
        x = self.values(s)
        return {v: x[self.system.h(v)] for v in self.system.interior}

    def positions(self, s=1) -> Dict[int, RationalPoint]:
        x = self.values(s)
        out = {v: RationalPoint(x[self.system.x(v)], x[self.system.h(v)]) for v in self.system.interior}
        out.update(negative_positions(self.system.ctype))
        return out

    def strict_conditions(self) -> List[Tuple[Fraction, Fraction]]:
        """Pairs (alpha, beta) such that realization at s needs alpha + beta*s > 0."""
        conds = []
        for e in self.system.edges:
            i = self.system.length(e)
            conds.append((self.base[i], self.slope[i]))
        for v in self.system.interior:
            i = self.system.h(v)
            conds.append((self.base[i] - 1, self.slope[i]))
        return conds


def solve_parametric(t: CoralType, lam: "Constraint", check_dimension: bool = True) -> Optional[ParametricSolution]:
    """Solve the type's system for all scalings s of the constraint values.

    Returns None when no s >= 1 makes the system consistent. Raises
    SolverInconsistency when the solution is not unique, which happens only
    if the constraint is not general for this type.
    """
    check_constraint_directions(t, lam)
    system = build_system(t, lam)
    n = system.nvars
    if check_dimension and t.is_general():
        nullity = n - linalg.rank(system.A[:system.edge_rows], n)
        if nullity != t.graph.l - 1:
            raise SolverInconsistency(
                f"type has a {nullity}-dimensional family before constraints, expected {t.graph.l - 1}")

    sol = linalg.solve(system.A, [system.b0, system.b1], nvars=n)
    if sol.nullity > 0:
        raise SolverInconsistency(f"constraint leaves a {sol.nullity}-dimensional family of solutions")

    fixed_s = None
    for c0, c1 in sol.conditions:
        if c1 == 0:
            return None
        s = -c0 / c1
        if fixed_s is not None and s != fixed_s:
            return None
        fixed_s = s
    if fixed_s is not None and fixed_s < 1:
        return None
    return ParametricSolution(system, sol.particular[0], sol.particular[1], fixed_s)


@dataclass(frozen=True)
class ScaleWindow:
    """The set of s >= 1 at which a type is realized: an interval."""
    lower: Fraction
    lower_open: bool
    upper: Optional[Fraction]
    upper_open: bool

    @property
    def empty(self) -> bool:
        if self.upper is None:
            return False
        if self.lower > self.upper:
            return True
        return self.lower == self.upper and (self.lower_open or self.upper_open)

    def __contains__(self, s) -> bool:
        s = Fraction(s)
        if self.empty:
            return False
        above = s > self.lower or (s == self.lower and not self.lower_open)
        below = self.upper is None or s < self.upper or (s == self.upper and not self.upper_open)
        return above and below


EMPTY_WINDOW = ScaleWindow(Fraction(1), True, Fraction(1), True)


def scale_window(sol: Optional[ParametricSolution]) -> ScaleWindow:
    """Exact feasible range of s >= 1 for the strict positivity conditions."""
    if sol is None:
        return EMPTY_WINDOW
    conds = sol.strict_conditions()
    if sol.fixed_s is not None:
        s = sol.fixed_s
        if all(a + b * s > 0 for a, b in conds):
            return ScaleWindow(s, False, s, False)
        return EMPTY_WINDOW

    lower, lower_open = Fraction(1), False
    upper, upper_open = None, False
    for a, b in conds:
        if b == 0:
            if a <= 0:
                return EMPTY_WINDOW
            continue
        bound = -a / b
        if b > 0 and (bound > lower or (bound == lower and not lower_open)):
            lower, lower_open = bound, True
        elif b < 0 and (upper is None or bound <= upper):
            upper, upper_open = bound, True
    return ScaleWindow(lower, lower_open, upper, upper_open)


# ============================================================================
# Realization and evaluation
# ============================================================================

def realize(t: CoralType, lam: "Constraint") -> Optional[TropicalCoral]:
    """The unique coral of type t matching lam, or None if there is none."""
    if not t.is_general():
        raise NonGeneralType("only general types are realized")
    if len(lam.entries) != t.graph.l - 1:
        raise DirectionMismatch(f"type needs {t.graph.l - 1} constraint entries, got {len(lam.entries)}")
    sol = solve_parametric(t, lam)
    if sol is None or not sol.valid_at(1):
        return None
    if any(L <= 0 for L in sol.lengths().values()):
        return None
    if any(h <= 1 for h in sol.heights().values()):
        return None
    return TropicalCoral(t, sol.positions())


def evaluation(c: TropicalCoral, indices: Sequence[int]) -> List[QuotientClass]:
    """Quotient classes of the labelled positive edges e_i (1-based indices)."""
    g = c.graph
    out = []
    for i in indices:
        if not 1 <= i <= len(g.labels):
            raise BadIndex(f"positive edge index {i} out of range 1..{len(g.labels)}")
        e = g.labels[i - 1]
        (v,) = g.ends(e)
        out.append(project_mod(c.ctype.flag_dirs[(v, e)], c.positions[v]))
    return out


@dataclass(frozen=True)
class _NoConstraint:
    entries: tuple = ()


_EMPTY = _NoConstraint()
