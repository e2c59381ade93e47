"""
Tests for lattice arithmetic and exact linear algebra.
"""

from fractions import Fraction

import pytest

from corals.core.errors import NotPrimitive, ZeroVector
from corals.tropical import linalg
from corals.tropical.lattice import (
    LatticeVector,
    QuotientClass,
    RationalPoint,
    angle_key,
    det2,
    pairing,
    primitive,
    primitive_of,
    project_mod,
)


def test_primitive_splits_off_the_gcd():
    assert primitive(LatticeVector(6, 3)) == (LatticeVector(2, 1), 3)
    assert primitive(LatticeVector(0, -5)) == (LatticeVector(0, -1), 5)


def test_primitive_of_zero_vector_raises():
    with pytest.raises(ZeroVector):
        primitive(LatticeVector(0, 0))
    with pytest.raises(ZeroVector):
        primitive_of(0, 0)


def test_primitive_of_rational_vector():
    u, t = primitive_of(Fraction(1, 2), Fraction(1, 4))
    assert u == LatticeVector(2, 1)
    assert t == Fraction(1, 4)


def test_pairing_is_the_determinant():
    u = LatticeVector(2, 1)
    x = RationalPoint(0, 2)
    assert pairing(u, x) == 4
    assert det2(LatticeVector(2, 1), LatticeVector(-3, 1)) == 5


def test_project_mod_requires_primitive_direction():
    assert project_mod(LatticeVector(2, 1), RationalPoint(0, 2)) == QuotientClass(LatticeVector(2, 1), 4)
    with pytest.raises(NotPrimitive):
        project_mod(LatticeVector(4, 2), RationalPoint(0, 2))


def test_quotient_class_is_constant_along_the_direction():
    u = LatticeVector(-3, 1)
    p = RationalPoint(Fraction(1, 3), 2)
    assert pairing(u, p) == pairing(u, p.step(Fraction(7, 5), u))


def test_angle_key_orders_anticlockwise():
    dirs = [LatticeVector(1, 0), LatticeVector(1, 1), LatticeVector(0, 1), LatticeVector(-1, 1),
            LatticeVector(-1, 0), LatticeVector(-1, -1), LatticeVector(0, -1), LatticeVector(1, -1)]
    keys = [angle_key(u) for u in dirs]
    assert keys == sorted(keys)
    assert angle_key(LatticeVector(0, 1), LatticeVector(0, 1)) == 0


def test_lattice_vector_rejects_rationals():
    with pytest.raises(TypeError):
        LatticeVector(Fraction(1, 2), 1)


def test_solve_unique_solution():
    sol = linalg.solve([[1, 1], [1, -1]], [[3, 1]], nvars=2)
    assert sol.nullity == 0
    assert sol.consistent()
    assert sol.particular[0] == [2, 1]


def test_solve_reports_inconsistent_rows():
    sol = linalg.solve([[1, 1], [2, 2]], [[1, 3]], nvars=2)
    assert not sol.consistent()
    assert sol.nullity == 1
    assert len(sol.kernel) == 1


def test_solve_carries_several_right_hand_sides():
    sol = linalg.solve([[2, 0], [0, 4]], [[2, 4], [1, 1]], nvars=2)
    assert sol.particular == [[1, 1], [Fraction(1, 2), Fraction(1, 4)]]


def test_solve2_singular_returns_none():
    assert linalg.solve2(1, 2, 2, 4, 1, 1) is None
    assert linalg.solve2(1, 0, 0, 2, 3, 4) == (3, 2)


def test_rank():
    assert linalg.rank([[1, 2], [2, 4]], 2) == 1
    assert linalg.rank([], 3) == 0
