"""
Tests for computational bases and braid generator matrices
"""

import pytest

from core.errors import DomainError
from modules import linalg
from modules.braidrep import (
    build_rep,
    check_braid_relations,
    comp_basis,
    export_rep,
    reorder_basis,
    sigma2_b3,
    sigma2_b4,
    sigma_even,
    sigma_odd,
    unitarity_defect,
)
from modules.cyclo import zeta

GAMMA = zeta(48, 2)
OMEGA = zeta(48, 8) - 1


def diag(*entries):
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


@pytest.fixture(scope="module")
def fib_b3(fib_table):
    return build_rep(fib_table, "tau", "tau", 3)


@pytest.fixture(scope="module")
def su2_4_b4(su2_4_table):
    return build_rep(su2_4_table, "X_e", "Y", 4)


class TestCompBasis:
    @pytest.mark.parametrize("m,size", [(3, 2), (4, 3), (5, 5), (6, 8)])
    def test_fibonacci_dimensions(self, fibonacci, m, size):
        assert len(comp_basis(fibonacci, "tau", "tau", m)) == size

    def test_order_and_labels(self, fibonacci, su2_4):
        assert " ".join(str(s) for s in comp_basis(fibonacci, "tau", "tau", 3)) == "(tau) (one)"
        basis = comp_basis(su2_4, "X_e", "Y", 4)
        assert " ".join(str(s) for s in basis) == "(Y,Y) (Y,one) (one,Y)"
        keys = [s.key for s in comp_basis(fibonacci, "tau", "tau", 5)]
        assert keys == sorted(keys, reverse=True)

    def test_vacuum_charge(self, fibonacci):
        assert len(comp_basis(fibonacci, "tau", "one", 3)) == 1

    def test_too_few_strands(self, fibonacci):
        with pytest.raises(DomainError):
            comp_basis(fibonacci, "tau", "tau", 2)


class TestFibonacciB3:
    def test_sigma1_is_diagonal_r(self, fib_b3):
        assert fib_b3.basis_line() == "(tau) (one)"
        assert linalg.equal(fib_b3.sigma(1), diag(zeta(10, 3), zeta(10, 6)))

    def test_sigma2_conjugates_sigma1(self, fib_b3, fib_table):
        s2 = fib_b3.sigma(2)
        assert s2[0][0] + s2[1][1] == zeta(10, 3) + zeta(10, 6)
        assert linalg.equal(s2, sigma2_b3(fib_table, "tau", "tau"))
        assert s2[0][1] and s2[1][0]

    def test_inverses(self, fib_b3):
        assert linalg.is_identity(linalg.matmul(fib_b3.sigma(1), fib_b3.sigma(-1)))
        assert linalg.is_identity(linalg.matmul(fib_b3.sigma(-2), fib_b3.sigma(2)))
        with pytest.raises(DomainError):
            fib_b3.sigma(0)
        with pytest.raises(DomainError):
            fib_b3.sigma(3)

    def test_braid_relation_and_unitarity(self, fib_b3):
        assert check_braid_relations(fib_b3.generators) == []
        assert unitarity_defect(fib_b3, 64) < 1e-12

    def test_reorder(self, fib_b3):
        swapped = reorder_basis(fib_b3, [1, 0])
        assert swapped.basis_line() == "(one) (tau)"
        assert linalg.equal(swapped.sigma(1), diag(zeta(10, 6), zeta(10, 3)))
        with pytest.raises(DomainError):
            reorder_basis(fib_b3, [0, 0])

    def test_export(self, fib_b3):
        text = export_rep(fib_b3, "text")
        assert text.startswith("basis: (tau) (one)")
        assert "sigma_2:" in text
        data = export_rep(fib_b3, "json")
        assert data["basis"] == [["tau"], ["one"]]
        assert len(data["generators"]) == 2
        assert data["generators"][0][1][0] == [0.0, 0.0]
        with pytest.raises(DomainError):
            export_rep(fib_b3, "xml")


class TestGeneratorBuilders:
    def test_odd_generators_only(self, fibonacci, fib_table):
        basis = comp_basis(fibonacci, "tau", "tau", 4)
        with pytest.raises(DomainError):
            sigma_odd(fibonacci, basis, "tau", 2)
        with pytest.raises(DomainError):
            sigma_even(fib_table, "tau", "tau", 4, 3)

    def test_b4_sigma2_matches_builder(self, fib_table):
        rep = build_rep(fib_table, "tau", "tau", 4)
        assert linalg.equal(rep.sigma(2), sigma2_b4(fib_table, "tau", "tau"))

    @pytest.mark.parametrize("m", [4, 5, 6])
    def test_fibonacci_braid_relations(self, fib_table, m):
        rep = build_rep(fib_table, "tau", "tau", m)
        assert len(rep.generators) == m - 1
        assert check_braid_relations(rep.generators) == []
        assert unitarity_defect(rep, 64) < 1e-12

    def test_ising_braid_relations(self, ising_table):
        rep = build_rep(ising_table, "sigma", "sigma", 5)
        assert check_braid_relations(rep.generators) == []

    def test_empty_hom_space(self, fib_table):
        with pytest.raises(DomainError):
            build_rep(fib_table, "one", "tau", 3)


@pytest.mark.slow
class TestSU24:
    def test_reordered_generators(self, su2_4_b4):
        rep = reorder_basis(su2_4_b4, [0, 2, 1])
        assert rep.basis_line() == "(Y,Y) (one,Y) (Y,one)"
        assert linalg.equal(linalg.divide(rep.sigma(1), GAMMA), diag(1, OMEGA, 1))
        assert linalg.equal(linalg.divide(rep.sigma(3), GAMMA), diag(1, 1, OMEGA))

    def test_braid_relations(self, su2_4_b4):
        assert check_braid_relations(su2_4_b4.generators) == []
        assert unitarity_defect(su2_4_b4, 64) < 1e-12
