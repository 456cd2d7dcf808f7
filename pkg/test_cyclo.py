"""
Tests for exact cyclotomic and radical-tower arithmetic
"""

from fractions import Fraction

import pytest

from core.errors import DomainError, UnrepresentableError
from modules import linalg
from modules.cyclo import CycloNumber, SqrtTower, TowerNumber, cyclo_sqrt, root_of_unity, zeta


def test_zeta_powers_reduce():
    assert zeta(4) ** 2 == -1
    assert zeta(12) ** 12 == 1
    assert zeta(10, 13) == zeta(10, 3)


def test_root_of_unity_in_full_turns():
    assert root_of_unity(48, Fraction(1, 12)) == zeta(48, 4)
    assert root_of_unity(48, Fraction(1, 24)) == zeta(48, 2)
    assert root_of_unity(10, Fraction(1, 2)) == -1


def test_root_of_unity_outside_field():
    with pytest.raises(UnrepresentableError):
        root_of_unity(10, Fraction(1, 4))


def test_field_operations():
    x = zeta(5) + 2
    assert x * x.inverse() == 1
    assert (x - x).is_zero()
    assert x / x == 1
    assert 3 * zeta(5) - zeta(5) == 2 * zeta(5)


def test_conjugate_and_galois():
    assert zeta(8).conjugate() == zeta(8, 7)
    assert zeta(8).galois(3) == zeta(8, 3)
    assert (zeta(5) + zeta(5, 4)).is_real()
    assert not zeta(5).is_real()


def test_embedding():
    assert complex(zeta(4)) == pytest.approx(1j)
    golden_inverse = zeta(10, 2) + zeta(10, 8)
    assert complex(golden_inverse).real == pytest.approx((5 ** 0.5 - 1) / 2)


def test_mixed_orders_lift():
    assert zeta(4) * zeta(8) == zeta(8, 3)
    assert zeta(4) + zeta(12, 3) == 2 * zeta(4)


def test_equal_values_hash_alike_across_orders():
    assert zeta(4) == zeta(8, 2)
    assert hash(zeta(4)) == hash(zeta(8, 2))
    assert len({zeta(4), zeta(8, 2), zeta(48, 12)}) == 1
    assert zeta(6) == -zeta(3, 2)
    assert hash(zeta(6)) == hash(-zeta(3, 2))
    assert hash(zeta(12, 6)) == hash(-1)


@pytest.mark.parametrize(
    "x,order",
    [
        (zeta(8, 2), 4),
        (zeta(24, 8), 3),
        (zeta(10, 2) + zeta(10, 8), 5),
        (zeta(12, 3) + zeta(12, 9), 1),
        (zeta(16) + 1, 16),
    ],
)
def test_minimal_order(x, order):
    low = x.minimal()
    assert low.order == order
    assert low == x


def test_lift_through_minimal_field():
    assert zeta(8, 2).lift(12) == zeta(12, 3)
    with pytest.raises(DomainError):
        zeta(8).lift(12)


def test_inverse_uses_exact_elimination():
    x = zeta(48, 5) + Fraction(2, 7) * zeta(48, 11) - 3
    assert x * x.inverse() == 1
    assert linalg.solve([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]], [Fraction(5), Fraction(10)]) == [1, 3]
    with pytest.raises(DomainError):
        linalg.solve([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [Fraction(1), Fraction(2)])


@pytest.mark.parametrize("m,q", [(8, 2), (12, 3), (16, Fraction(1, 2)), (5, 4)])
def test_cyclo_sqrt_finds_roots(m, q):
    x = CycloNumber.from_rational(m, q)
    root = cyclo_sqrt(x)
    assert root is not None
    assert root * root == x


def test_cyclo_sqrt_of_minus_one_needs_i():
    assert cyclo_sqrt(CycloNumber.from_rational(12, -1)) ** 2 == -1
    assert cyclo_sqrt(CycloNumber.from_rational(5, -1)) is None


def test_cyclo_sqrt_absent():
    assert cyclo_sqrt(CycloNumber.from_rational(10, 3)) is None
    assert cyclo_sqrt(zeta(8)) is None
    assert cyclo_sqrt(zeta(8, 2)) in (zeta(8), -zeta(8))


@pytest.mark.parametrize(
    "root",
    [
        zeta(8) + Fraction(1234567, 1000003),
        100000 * zeta(12) + zeta(12, 5) / 3 + 7,
        zeta(5) + 3,
        Fraction(7, 9) * zeta(48, 5) - 4000 * zeta(48, 2) + Fraction(1, 11),
    ],
)
def test_cyclo_sqrt_recovers_large_coefficients(root):
    found = cyclo_sqrt(root * root)
    assert found is not None
    assert found in (root, -root)


def test_tower_adjoin_and_arithmetic():
    tower = SqrtTower(10)
    y = tower.adjoin(3)
    assert len(tower) == 1
    assert y * y == 3
    assert complex(y) == pytest.approx(3 ** 0.5)
    z = 1 + y
    assert z * z.inverse() == 1
    assert z.conjugate() == z
    assert z.is_real()


def test_tower_sqrt_uses_existing_radicals():
    tower = SqrtTower(10)
    y = tower.adjoin(3)
    root = tower.sqrt(3)
    assert root in (y, -y)
    assert tower.sqrt(12) * tower.sqrt(12) == 12


def test_tower_sqrt_prefers_cyclotomic_roots():
    tower = SqrtTower(8)
    root = tower.sqrt(2)
    assert root is not None
    assert root.is_cyclotomic()
    assert len(tower) == 0


def test_tower_rejects_zero_radicand():
    with pytest.raises(DomainError):
        SqrtTower(10).adjoin(0)


def test_tower_json_restores_radicals():
    tower = SqrtTower(10)
    tower.adjoin(zeta(10, 2) + zeta(10, 8))
    restored = SqrtTower.from_json(10, tower.to_json())
    assert restored.extends(tower) and tower.extends(restored)
    x = tower.radical(0) * 2 + 1
    assert TowerNumber.from_terms_json(restored, x.terms_to_json()) == x


def test_tower_keeps_its_own_field():
    tower = SqrtTower(8)
    y = tower.adjoin(3)
    with pytest.raises(DomainError):
        y * zeta(16)
    z = y * zeta(16, 2)
    assert z * z == 3 * zeta(16, 4)
    assert complex(z * z) == pytest.approx(complex(3 * zeta(16, 4)))
    assert hash(z * z) == hash(3 * zeta(4))
