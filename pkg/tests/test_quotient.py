"""
Tests for the Z-action, tropical area and the area-graded count.
"""

import random
from fractions import Fraction

import pytest

from corals.core.errors import BadConstraint
from corals.tropical.constraints import Constraint, matches
from corals.tropical.coral import Degree, validate_coral
from corals.tropical.quotient import (
    QuotientDegree,
    area_agrees,
    count_series,
    normalize_mod_Z,
    shear,
    stable_intersections,
    translate,
    translate_constraint,
    translate_degree,
    tropical_area,
)

from tests.conftest import P, V, random_coral, y_shaped_coral


@pytest.fixture
def steep_class():
    degree = Degree((V(1, 4), V(1, 2)), (V(-2, -6),))
    return QuotientDegree(1, degree), Constraint.from_values([V(1, 4)], [-20])


def test_shear():
    assert shear(V(2, 1), 1, 1) == V(3, 1)
    assert shear(V(0, -5), -2, 3) == V(30, -5)


def test_translated_degree_stays_balanced(simple_degree):
    assert translate_degree(simple_degree, 3, 2).is_balanced()


def test_area_of_simple_example(simple_coral):
    assert tropical_area(simple_coral, 1) == 15
    assert stable_intersections(simple_coral, 1)[1] == 3
    assert area_agrees(simple_coral, 1)


def test_area_of_mirrored_example():
    mirror = y_shaped_coral(V(-2, 1), V(3, 1), {0: 5, 1: 3, 2: 2}, P(0, 2), P(0, 1))
    assert tropical_area(mirror, 1) == 15


def test_area_is_invariant_under_translation(simple_coral):
    moved = translate(simple_coral, 1, 1)
    assert validate_coral(moved).ok
    assert moved.positions[1] == P(2, 2)
    assert tropical_area(moved, 1) == tropical_area(simple_coral, 1)


def test_translated_constraint_still_matches(simple_coral, simple_constraint):
    moved = translate(simple_coral, 2, 1)
    assert matches(moved, translate_constraint(simple_constraint, 2, 1))


@pytest.mark.parametrize("first,b,normalized,offset", [
    (V(2, 1), 1, V(0, 1), -2),
    (V(7, 2), 3, V(1, 2), -1),
    (V(0, 1), 1, V(0, 1), 0),
])
def test_normalize_mod_Z(first, b, normalized, offset):
    d = Degree((first,), (-first,))
    qd = normalize_mod_Z(d, b)
    assert qd.representative.positive[0] == normalized
    assert qd.offset == offset
    assert qd.b == b


def test_series_starts_with_the_untranslated_count(steep_class):
    qd, lam = steep_class
    series = count_series(qd, lam, 0)
    assert series.coefficients == {0: 1}
    assert series.coefficient(3) == 0


def test_series_stays_below_the_truncation(steep_class):
    qd, lam = steep_class
    series = count_series(qd, lam, 7)
    assert series.coefficient(0) == 1
    assert all(0 <= a <= 7 for a in series.coefficients)
    assert all(v > 0 for v in series.coefficients.values())


def test_series_rejects_negative_truncation(steep_class):
    qd, lam = steep_class
    with pytest.raises(BadConstraint):
        count_series(qd, lam, -1)


def test_series_rejects_bad_constraint(steep_class):
    qd, _ = steep_class
    with pytest.raises(BadConstraint):
        count_series(qd, Constraint.from_values([V(1, 4)], [Fraction(20)]), 3)


def test_series_leaves_out_translates_the_constraint_does_not_fit(steep_class):
    qd, lam = steep_class
    series = count_series(qd, lam, 0)
    assert series.skipped >= 1
    assert series.coefficients == {0: 1}


def _on_a_line(c, b):
    return any((p.radial() / b).denominator == 1 for p in c.positions.values())


def _area_corpus():
    rng = random.Random(2718)
    corals = [
        y_shaped_coral(V(2, 1), V(-3, 1), {0: 5, 1: 3, 2: 2}, P(0, 2), P(0, 1)),
        y_shaped_coral(V(-1, 1), V(1, 1), {0: 2, 1: 1, 2: 1}, P(0, 2), P(0, 1)),
    ]
    while len(corals) < 20:
        corals.append(random_coral(rng, 2 + len(corals) % 3, integral=True)[0])
    return corals


@pytest.mark.parametrize("b", [1, 2])
def test_area_on_a_corpus_with_vertices_on_the_lines(b):
    corpus = _area_corpus()
    assert sum(1 for c in corpus if _on_a_line(c, b)) >= 2
    for c in corpus:
        assert area_agrees(c, b)
        area = tropical_area(c, b)
        assert isinstance(area, int) and area >= 0
        assert sum(stable_intersections(c, b, Fraction(2, 7), -1).values()) == area
        for k in (-1, 2):
            assert tropical_area(translate(c, k, b), b) == area
