"""
Tests for type enumeration, the per-type linear system and realization.
"""

import itertools
import random
from fractions import Fraction

import pytest

from corals.core.errors import BadIndex, DirectionMismatch, EmptyDegree, InvalidDegree
from corals.tropical.constraints import Constraint
from corals.tropical.coral import Degree, canonical_form, validate_coral
from corals.tropical.coralgraph import type_key
from corals.tropical.lattice import QuotientClass
from corals.tropical.moduli import (
    _tree_type,
    binary_trees,
    enumerate_types,
    evaluation,
    moduli_dimension,
    realize,
    solve_parametric,
)

from tests.conftest import V, random_degree


@pytest.mark.parametrize("n,expected", [(3, 1), (4, 3), (5, 15), (6, 105)])
def test_binary_tree_counts(n, expected):
    assert sum(1 for _ in binary_trees(n)) == expected


def test_binary_trees_need_three_leaves():
    with pytest.raises(ValueError):
        list(binary_trees(2))


def test_simple_degree_has_one_general_type(simple_degree):
    catalog = enumerate_types(simple_degree)
    assert len(catalog) == 1
    (t,) = catalog.types
    assert t.is_general()
    assert list(t.negvert_weights.values()) == [5]


def test_degenerate_types_are_listed_on_request(simple_degree):
    catalog = enumerate_types(simple_degree, general_only=False)
    assert len(catalog) == 2
    assert sum(1 for t in catalog.types if not t.is_general()) == 1


def test_overlapping_germs_are_excluded():
    d = Degree((V(-1, 1), V(0, 1), V(1, 1)), (V(0, -3),))
    assert len(enumerate_types(d)) == 2


def test_enumeration_is_deterministic(y_degree):
    assert enumerate_types(y_degree).types == enumerate_types(y_degree).types


def test_degree_without_negative_entries_is_empty():
    with pytest.raises(EmptyDegree):
        enumerate_types(Degree((V(0, 1),), ()))


def test_unbalanced_degree_is_rejected():
    with pytest.raises(InvalidDegree):
        enumerate_types(Degree((V(1, 1), V(0, 1)), (V(0, -1),)))


def test_general_type_has_expected_dimension(simple_degree):
    (t,) = enumerate_types(simple_degree).types
    assert moduli_dimension(t) == t.graph.l - 1 == 1


def test_realize_recovers_the_simple_example(simple_coral, simple_degree, simple_constraint):
    (t,) = enumerate_types(simple_degree).types
    c = realize(t, simple_constraint)
    assert c is not None
    assert validate_coral(c).ok
    assert c == canonical_form(simple_coral)


def test_realize_returns_none_below_the_boundary(simple_degree):
    (t,) = enumerate_types(simple_degree).types
    assert realize(t, Constraint.from_values([V(2, 1)], [Fraction(1, 100)])) is None


def test_parametric_solution_scales_with_the_constraint(simple_degree):
    (t,) = enumerate_types(simple_degree).types
    sol = solve_parametric(t, Constraint.from_values([V(2, 1)], [4]))
    assert sol.fixed_s is None
    assert sorted(sol.heights(1).values()) == [2]
    assert sorted(sol.heights(3).values()) == [6]


def test_realize_checks_constraint_shape(simple_degree):
    (t,) = enumerate_types(simple_degree).types
    with pytest.raises(DirectionMismatch):
        realize(t, Constraint.from_values([V(-3, 1)], [4]))
    with pytest.raises(DirectionMismatch):
        realize(t, Constraint(()))


def test_evaluation_uses_one_based_indices(simple_coral):
    assert evaluation(simple_coral, [1]) == [QuotientClass(V(2, 1), 4)]
    assert evaluation(simple_coral, [2]) == [QuotientClass(V(-3, 1), -6)]
    with pytest.raises(BadIndex):
        evaluation(simple_coral, [3])
    with pytest.raises(BadIndex):
        evaluation(simple_coral, [0])


def _decode_prufer(code, size):
    degree = [1] * size
    for v in code:
        degree[v] += 1
    edges = []
    for v in code:
        leaf = min(u for u in range(size) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    a, b = [u for u in range(size) if degree[u] == 1]
    edges.append((a, b))
    return edges


def _trees_from_prufer_codes(n):
    """Binary trees on leaves 0..n-1: codes listing each internal node exactly twice."""
    internal = list(range(n, 2 * n - 2))
    for code in sorted(set(itertools.permutations(internal * 2))):
        yield _decode_prufer(code, 2 * n - 2)


@pytest.mark.parametrize("n,expected", [(3, 1), (4, 3), (5, 15)])
def test_prufer_codes_give_every_tree_up_to_relabelling(n, expected):
    internal_orders = 1
    for k in range(2, n - 1):
        internal_orders *= k
    assert sum(1 for _ in _trees_from_prufer_codes(n)) == expected * internal_orders


def test_enumeration_agrees_with_brute_force():
    rng = random.Random(17)
    shapes = [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2)]
    for i in range(30):
        l, m = shapes[i % len(shapes)]
        d = random_degree(rng, l, m)
        brute = set()
        for edges in _trees_from_prufer_codes(l + m):
            t = _tree_type(d, edges)
            if t is not None:
                brute.add(type_key(t))
        catalog = enumerate_types(d)
        assert {type_key(t) for t in catalog.types} == brute
        assert len(catalog) == len(brute)
