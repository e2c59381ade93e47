"""
Shared fixtures: the SimpleExample coral and Morse tree, the Y-coral, and
their degrees and constraints.
"""

import itertools
from fractions import Fraction
from functools import reduce
from operator import add

import pytest

from corals.tropical.constraints import Constraint
from corals.tropical.coral import Degree, build_coral
from corals.tropical.coralgraph import CoralGraph, VertexClass
from corals.tropical.lattice import LatticeVector, RationalPoint, det2
from corals.tropical.moduli import enumerate_types
from corals.tropical.morse import MorseTree, free_vertices, lift_type


def V(a, b):
    return LatticeVector(a, b)


def P(x, h):
    return RationalPoint(Fraction(x), Fraction(h))


def y_shaped_coral(left, right, weights, interior, negative):
    """One interior vertex joined to one negative vertex, two positive edges."""
    graph = CoralGraph(
        vertices=[(0, VertexClass.NEGATIVE), (1, VertexClass.INTERIOR)],
        positive_edges=[(1, 1), (2, 1)],
        bounded_edges=[(0, (0, 1))],
        weights=weights,
        labels=[1, 2],
    )
    return build_coral(graph, {0: negative, 1: interior}, {1: left, 2: right})


def _vector_sum(vectors):
    return reduce(add, vectors, V(0, 0))


def in_general_position(ends):
    """No two disjoint proper sub-sums of the ends are parallel."""
    for side in itertools.product((0, 1, 2), repeat=len(ends)):
        left = [v for v, s in zip(ends, side) if s == 1]
        right = [v for v, s in zip(ends, side) if s == 2]
        if not left or not right or 0 not in side:
            continue
        if det2(_vector_sum(left), _vector_sum(right)) == 0:
            return False
    return True


def random_degree(rng, l, m=1):
    """Degree with l positive and m negative entries in general position."""
    while True:
        positive = []
        for _ in range(l):
            b = rng.choice((1, 2))
            a = rng.choice((-3, -1, 1, 3)) if b == 2 else rng.randint(-2, 2)
            positive.append(rng.choice((1, 1, 2)) * V(a, b))
        total = _vector_sum(positive)
        if m == 1:
            negative = [-total]
        else:
            first = V(rng.randint(-2, 2), -rng.randint(1, total.b - 1))
            negative = [first, -total - first]
        if in_general_position(positive + negative):
            return Degree(tuple(positive), tuple(negative))


def random_heights(rng, count):
    """Strictly increasing heights above 1."""
    heights = [Fraction(rng.randint(3, 8), rng.choice((1, 2)))]
    while len(heights) < count:
        heights.append(heights[-1] + Fraction(rng.randint(1, 6), rng.choice((1, 2, 3))))
    return heights


def random_coral(rng, l, integral=False):
    """A general coral with one negative vertex, of a random type of a random degree.

    With integral=True every free height is an integer, which puts vertices
    on lattice points more often.
    """
    d = random_degree(rng, l)
    t = rng.choice(enumerate_types(d).types)
    count = len(free_vertices(t))
    if integral:
        heights = [Fraction(h) for h in sorted(rng.sample(range(2, 12), count))]
    else:
        heights = random_heights(rng, count)
    return lift_type(t, heights), heights


@pytest.fixture
def simple_coral():
    return y_shaped_coral(V(2, 1), V(-3, 1), {0: 5, 1: 3, 2: 2}, P(0, 2), P(0, 1))


@pytest.fixture
def simple_degree():
    return Degree((V(6, 3), V(-6, 2)), (V(0, -5),))


@pytest.fixture
def simple_constraint():
    return Constraint.from_values([V(2, 1)], [4])


@pytest.fixture
def y_coral():
    return y_shaped_coral(V(-1, 1), V(1, 1), {0: 2, 1: 1, 2: 1}, P(0, 2), P(0, 1))


@pytest.fixture
def y_degree():
    return Degree((V(-1, 1), V(1, 1)), (V(0, -2),))


@pytest.fixture
def y_constraint():
    return Constraint.from_values([V(-1, 1)], [-2])


def simple_tree_with(phi_root=0, phi_01=2, phi_12=-3):
    return MorseTree(
        vertices=(0, 1, 2, 3),
        edges=((0, (0, 1)), (1, (1, 2)), (2, (1, 3))),
        cyclic={0: (0,), 1: (0, 1, 2), 2: (1,), 3: (2,)},
        root=0,
        decoration=(0, 3, 5),
        phi={0: Fraction(phi_root), 1: Fraction(0), 2: Fraction(phi_01), 3: Fraction(phi_12)},
    )


@pytest.fixture
def simple_tree():
    return simple_tree_with()


@pytest.fixture
def cyclic_graph():
    return CoralGraph(
        vertices=[(0, VertexClass.NEGATIVE), (1, VertexClass.INTERIOR),
                  (2, VertexClass.INTERIOR), (3, VertexClass.INTERIOR)],
        positive_edges=[(20, 2), (21, 3)],
        bounded_edges=[(10, (0, 1)), (11, (1, 2)), (12, (2, 3)), (13, (3, 1))],
        weights={10: 1, 11: 1, 12: 1, 13: 1, 20: 1, 21: 1},
        labels=[20, 21],
    )
