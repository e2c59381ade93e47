"""
Tests for tropical Morse trees: validation, types, lifting and projection.
"""

import random
from fractions import Fraction

import pytest

from corals.core.errors import HeightsInfeasible, InvalidTMT
from corals.tropical.coral import build_coral, canonical_form, validate_coral
from corals.tropical.coralgraph import CoralGraph, VertexClass, extend_graph
from corals.tropical.morse import (
    MorseTree,
    accelerations,
    canonical_tree,
    coral_to_tmt,
    free_vertices,
    height_parameters,
    is_good_type,
    leaf_order,
    lift_tmt,
    lift_type,
    predicted_contractions,
    region_labels,
    tmt_to_type,
    validate_tmt,
)

from tests.conftest import P, V, random_coral, simple_tree_with


def test_simple_tree_is_valid(simple_tree):
    report, profile = validate_tmt(simple_tree)
    assert report.ok
    assert profile.accelerations == {0: 5, 1: 3, 2: 2}
    assert profile.contracted == {0}


def test_ribbon_helpers(simple_tree):
    assert leaf_order(simple_tree) == [2, 3]
    assert region_labels(simple_tree) == {2: (0, 1), 3: (1, 2), 0: (0, 2)}
    assert accelerations(simple_tree) == {0: 5, 1: 3, 2: 2}
    assert predicted_contractions(simple_tree) == {0}
    assert canonical_tree(simple_tree) == simple_tree


def test_moving_the_root_breaks_balancing():
    report, profile = validate_tmt(simple_tree_with(phi_root=1))
    assert "root velocity nonzero (balancing fails)" in report.violations
    assert profile is None


def test_non_integral_leaf_position_fails_rationality():
    report, _ = validate_tmt(simple_tree_with(phi_01=Fraction(1, 2)))
    assert report.has("rationality")


def test_stretched_tree_is_valid():
    report, _ = validate_tmt(simple_tree_with(phi_01=4, phi_12=-6))
    assert report.ok


def test_decoration_length_is_checked(simple_tree):
    bad = MorseTree(simple_tree.vertices, simple_tree.edges, simple_tree.cyclic, 0, (0, 3), simple_tree.phi)
    report, _ = validate_tmt(bad)
    assert report.has("decoration length")


def test_tree_type_is_the_simple_example(simple_tree):
    t = tmt_to_type(simple_tree)
    assert t.positive_direction(1) == V(2, 1)
    assert t.graph.weight(1) == 3
    assert t.positive_direction(2) == V(-3, 1)
    assert t.graph.weight(2) == 2
    assert t.negvert_dirs == {0: V(0, -1)}
    assert t.negvert_weights == {0: 5}
    assert is_good_type(t)
    assert extend_graph(t).unbounded_count == 3


def test_lift_places_the_interior_vertex(simple_tree, simple_coral):
    c = lift_tmt(simple_tree, [2])
    assert validate_coral(c).ok
    assert c.positions[1] == P(0, 2)
    assert canonical_form(c) == canonical_form(simple_coral)
    assert lift_tmt(simple_tree, [Fraction(7, 2)]).positions[1] == P(0, Fraction(7, 2))


def test_lift_rejects_low_heights(simple_tree):
    with pytest.raises(HeightsInfeasible):
        lift_tmt(simple_tree, [1])
    with pytest.raises(HeightsInfeasible):
        lift_tmt(simple_tree, [2, 3])


def test_projection_inverts_lifting(simple_tree):
    c = lift_tmt(simple_tree, [2])
    assert coral_to_tmt(c) == simple_tree
    assert height_parameters(c) == [2]


def test_height_parameters_rebuild_the_coral(simple_coral):
    m = coral_to_tmt(simple_coral)
    rebuilt = lift_tmt(m, height_parameters(simple_coral))
    assert canonical_form(rebuilt) == canonical_form(simple_coral)


def test_projection_of_y_coral(y_coral):
    m = coral_to_tmt(y_coral)
    assert sorted(m.phi.values()) == [-1, 0, 0, 1]
    assert sorted(m.phi[v] for v in m.externals) == [-1, 0, 1]
    assert sorted(abs(n) for n in accelerations(m).values()) == [1, 1, 2]
    assert m.decoration == (0, 1, 2)


def test_projection_root_must_be_negative(simple_coral):
    with pytest.raises(InvalidTMT):
        coral_to_tmt(simple_coral, root=1)
    with pytest.raises(InvalidTMT):
        coral_to_tmt(simple_coral, root=0, root_end=1)


def _branch_coral(upper):
    """Interior vertices at (0, 2) and `upper`; three unit ends."""
    graph = CoralGraph(
        vertices=[(0, VertexClass.NEGATIVE), (1, VertexClass.INTERIOR), (2, VertexClass.INTERIOR)],
        positive_edges=[(3, 1), (4, 2), (5, 2)],
        bounded_edges=[(0, (0, 1)), (1, (1, 2))],
        weights={0: 3, 1: 1, 3: 1, 4: 1, 5: 1},
        labels=[3, 4, 5],
    )
    return build_coral(graph, {0: P(0, 1), 1: P(0, 2), 2: upper}, {3: V(-1, 1), 4: V(1, 1), 5: V(0, 1)})


def _interior_positions(c):
    return sorted(c.positions[v] for v in c.graph.interior_vertices)


def test_corals_of_one_type_share_their_tree():
    low, high = _branch_coral(P(1, 4)), _branch_coral(P(2, 6))
    m = coral_to_tmt(low)
    assert coral_to_tmt(high) == m
    assert Fraction(1, 2) in m.phi.values()
    assert height_parameters(low) == [2, 4]
    assert height_parameters(high) == [2, 6]


def test_three_end_tree_lifts_at_any_increasing_heights():
    m = coral_to_tmt(_branch_coral(P(1, 4)))
    c = lift_tmt(m, [2, 5])
    assert _interior_positions(c) == [P(0, 2), P(Fraction(3, 2), 5)]
    assert coral_to_tmt(c) == m
    with pytest.raises(HeightsInfeasible):
        lift_tmt(m, [2, 2])
    with pytest.raises(HeightsInfeasible):
        lift_tmt(m, [2, Fraction(3, 2)])


def test_positive_end_can_be_the_root(simple_coral):
    m = coral_to_tmt(simple_coral, root_end=1)
    report, profile = validate_tmt(m)
    assert report.ok
    assert m.phi[m.root] == 2
    assert profile.contracted == predicted_contractions(m)


@pytest.mark.parametrize("l", [2, 3, 4])
def test_random_corals_project_and_lift_back(l):
    rng = random.Random(1000 + l)
    for _ in range(70 if l < 4 else 60):
        c, heights = random_coral(rng, l)
        assert height_parameters(c) == heights
        m = coral_to_tmt(c)
        assert validate_tmt(m)[0].ok
        assert len(free_vertices(tmt_to_type(m))) == l - 1
        higher = [2 * h for h in heights]
        assert coral_to_tmt(lift_type(c.ctype, higher)) == m
        lifted = lift_tmt(m, higher)
        assert height_parameters(lifted) == higher
        assert coral_to_tmt(lifted) == m


@pytest.mark.parametrize("l", [2, 3])
def test_heights_rebuild_random_corals(l):
    rng = random.Random(7 * l)
    for _ in range(40):
        c, heights = random_coral(rng, l)
        rebuilt = lift_tmt(coral_to_tmt(c), heights)
        assert _interior_positions(rebuilt) == _interior_positions(c)


def test_contraction_law_on_random_trees():
    rng = random.Random(31)
    for i in range(20):
        c, _ = random_coral(rng, 2 + i % 3)
        m = coral_to_tmt(c)
        report, profile = validate_tmt(m)
        assert report.ok
        assert profile.contracted == predicted_contractions(m) == {m.root_edge}
