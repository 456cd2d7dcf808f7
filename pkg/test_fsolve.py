"""
Tests for the F-symbol solver, verification and gauge transforms
"""

import pytest

from core.errors import DataError, DomainError, InconsistentSystemError
from modules import linalg
from modules.cyclo import zeta
from modules.feature_flags import feature_flags
from modules.fsolve import (
    FSymbolTable,
    apply_gauge,
    solve,
    solve_easy,
    solve_step1,
    solve_step2,
    verify,
)
from modules.sparsepoly import SparsePoly

GOLDEN_INVERSE = zeta(10, 2) + zeta(10, 8)


def xs(n):
    return [SparsePoly.variable(i, n) for i in range(n)]


class TestSolveEasy:
    def test_linear_assignment(self):
        x0, x1 = xs(2)
        assignments, squares = solve_easy([x0 - 3 * x1])
        assert assignments == [(0, 3 * x1)]
        assert squares == []

    def test_known_square(self):
        _, x1 = xs(2)
        assignments, squares = solve_easy([2 * x1 ** 2 - 8])
        assert assignments == []
        assert squares == [(1, 4)]

    def test_first_assignment_wins(self):
        x0, _ = xs(2)
        assignments, _ = solve_easy([x0 - 1, x0 - 2])
        assert assignments == [(0, 1)]

    def test_zero_assignment(self):
        x0, _ = xs(2)
        assignments, _ = solve_easy([3 * x0])
        assert assignments == [(0, 0)]

    def test_skips_hard_relations(self):
        x0, x1 = xs(2)
        assert solve_easy([x0 * x1 - 1, x0 ** 2 + x1, x0 + x1 + 1]) == ([], [])


class TestFSymbolTable:
    def test_record_square_conflict(self, fibonacci):
        table = FSymbolTable(fibonacci)
        assert table.record_square(1, 2) == []
        assert table.record_square(1, 2) == []
        assert 1 in table.nonzero
        with pytest.raises(InconsistentSystemError):
            table.record_square(1, 3)

    def test_assign_back_substitutes(self, fibonacci):
        table = FSymbolTable(fibonacci)
        _, _, x2, _, _ = xs(5)
        table.assign(1, x2 + 1)
        table.assign(2, SparsePoly.constant(3, 5))
        assert table.values[1] == 4
        assert table.number(1) == 4

    def test_assign_must_be_triangular(self, fibonacci):
        table = FSymbolTable(fibonacci)
        x0, x1, _, _, _ = xs(5)
        with pytest.raises(DomainError):
            table.assign(2, x1)
        with pytest.raises(DomainError):
            table.number(0)

    def test_conflicting_constants(self, fibonacci):
        table = FSymbolTable(fibonacci)
        table.assign(3, SparsePoly.constant(1, 5))
        with pytest.raises(InconsistentSystemError):
            table.assign(3, SparsePoly.constant(2, 5))

    def test_incomplete_table_cannot_be_saved(self, fibonacci):
        with pytest.raises(DataError):
            FSymbolTable(fibonacci).to_json()


class TestFibonacci:
    def test_known_values(self, fib_table):
        assert fib_table.is_complete()
        assert fib_table.entry(("tau", "tau", "tau", "tau", "one", "one")) == GOLDEN_INVERSE
        assert fib_table.entry(("tau", "tau", "tau", "tau", "tau", "tau")) == -GOLDEN_INVERSE
        assert fib_table.entry(("tau", "tau", "tau", "one", "tau", "tau")) == 1

    def test_off_diagonal_product(self, fib_table):
        product = fib_table.entry((1, 1, 1, 1, 0, 1)) * fib_table.entry((1, 1, 1, 1, 1, 0))
        assert product == GOLDEN_INVERSE

    def test_vacuum_and_inadmissible_entries(self, fib_table):
        assert fib_table.entry(("one", "tau", "tau", "tau", "tau", "tau")) == 1
        assert fib_table.entry(("tau", "tau", "tau", "one", "one", "one")) == 0

    def test_fmatrix_is_involutive(self, fib_table):
        block = fib_table.fmatrix("tau", "tau", "tau", "tau")
        assert [label.name for label in block.rows] == ["one", "tau"]
        assert linalg.is_identity(linalg.matmul(block.entries, block.entries))

    def test_summary(self, fib_solved):
        _, summary = fib_solved
        assert summary.variables == 5
        assert summary.radicals == 1
        assert summary.to_dict()["ring"] == "fibonacci"

    def test_verifies(self, fib_table):
        report = verify(fib_table)
        assert report.passed, report.to_dict()
        assert report.checked["pentagon"] > 0
        assert verify(fib_table, numeric=True, precision_bits=64).passed

    def test_broken_table_fails(self, fib_table):
        broken = fib_table.copy()
        broken.values[4] = -broken.values[4]
        report = verify(broken)
        assert not report.passed
        assert report.failures["orthogonality"]

    def test_incomplete_table_cannot_be_verified(self, fibonacci):
        with pytest.raises(DomainError):
            verify(FSymbolTable(fibonacci))

    def test_json_round_trip(self, fibonacci, fib_table):
        data = fib_table.to_json()
        restored = FSymbolTable.from_json(fibonacci, data)
        assert len(restored.tower) == 1
        for s in fib_table.sextuples:
            assert restored.entry(s) == fib_table.entry(s)
        assert verify(restored).passed

    def test_json_rejects_other_rings(self, ising, fibonacci, fib_table):
        with pytest.raises(DataError):
            FSymbolTable.from_json(ising, fib_table.to_json())
        data = fib_table.to_json()
        data["fsymbols"] = data["fsymbols"][:-1]
        with pytest.raises(DataError):
            FSymbolTable.from_json(fibonacci, data)

    def test_deferred_components_still_solve(self, fibonacci):
        table, residual = solve_step1(fibonacci, max_component_size=1, workers=1)
        assert residual
        table, summary = solve(fibonacci, workers=1, max_component_size=1, check=True)
        assert summary.deferred_components >= 1
        assert summary.verified

    def test_sign_enumeration(self, fibonacci):
        table, summary = solve(fibonacci, workers=1, enumerate_signs=True)
        assert summary.verified
        assert verify(table).passed

    def test_single_hexagon_sign(self, fibonacci):
        before = feature_flags.get_all_flags()
        with feature_flags.overrides(use_both_hexagon_signs=False):
            table, summary = solve(fibonacci, workers=1, check=True)
        assert summary.verified
        assert summary.to_dict()["flags"]["use_both_hexagon_signs"] is False
        assert feature_flags.get_all_flags() == before


class TestIsing:
    def test_no_radicals_needed(self, ising_solved):
        table, summary = ising_solved
        assert summary.radicals == 0
        assert len(table.tower) == 0

    def test_verifies(self, ising_table):
        assert verify(ising_table).passed

    def test_sigma_block(self, ising_table):
        value = ising_table.entry(("sigma", "sigma", "sigma", "sigma", "one", "one"))
        assert (value * value) * 2 == 1
        assert value.is_cyclotomic()


class TestGauge:
    def test_sign_gauge_flips_one_entry(self, ising_table):
        s = ("sigma", "sigma", "sigma", "sigma", "one", "psi")
        gauged = apply_gauge(ising_table, {("sigma", "sigma", "psi"): -1})
        assert gauged.entry(s) == -ising_table.entry(s)
        assert verify(gauged).passed

    def test_gauge_invariants(self, fib_table):
        gauged = apply_gauge(fib_table, {("tau", "tau", "tau"): 2})
        assert gauged.entry((1, 1, 1, 1, 0, 0)) == GOLDEN_INVERSE
        assert gauged.entry((1, 1, 1, 1, 1, 1)) == -GOLDEN_INVERSE
        assert gauged.entry((1, 1, 1, 1, 0, 1)) == 4 * fib_table.entry((1, 1, 1, 1, 0, 1))
        product = gauged.entry((1, 1, 1, 1, 0, 1)) * gauged.entry((1, 1, 1, 1, 1, 0))
        assert product == GOLDEN_INVERSE

    @pytest.mark.parametrize(
        "gauge",
        [
            {("one", "tau", "tau"): 2},
            {("tau", "tau", "tau"): 0},
            {("one", "one", "tau"): 1},
        ],
    )
    def test_rejected_gauges(self, fib_table, gauge):
        with pytest.raises(DomainError):
            apply_gauge(fib_table, gauge)


STRUCTURE_RINGS = [
    ("fibonacci", "fib_solved"),
    ("ising", "ising_solved"),
    pytest.param("su2_4", "su2_4_solved", marks=pytest.mark.slow),
]


class TestSolverStructure:
    @pytest.mark.parametrize("ring_name,solved_name", STRUCTURE_RINGS)
    def test_hexagons_solve_most_variables(self, request, ring_name, solved_name):
        _, summary = request.getfixturevalue(solved_name)
        assert summary.step1_solved / summary.variables > 0.5

    @pytest.mark.parametrize("ring_name,solved_name", STRUCTURE_RINGS)
    def test_few_pentagon_relations_survive_elimination(self, request, ring_name, solved_name):
        _, summary = request.getfixturevalue(solved_name)
        assert summary.pentagon_generated > 0
        assert summary.step2_residual < 0.0025 * summary.pentagon_generated

    @pytest.mark.parametrize("ring_name,solved_name", STRUCTURE_RINGS)
    def test_root_step_sees_only_univariate_quadratics(self, request, ring_name, solved_name):
        ring = request.getfixturevalue(ring_name)
        table, residual = solve_step1(ring, workers=1)
        basis = solve_step2(ring, table, residual, workers=1)
        for p in basis:
            assert len(p.variables()) == 1, p.to_text(table.name_of)
            assert p.degree() <= 2, p.to_text(table.name_of)


def _step1_snapshot(ring, workers):
    table, residual = solve_step1(ring, workers=workers)
    return (
        [(v, table.values[v].to_text()) for v in sorted(table.values)],
        sorted((v, str(alpha)) for v, alpha in table.known_squares.items()),
        [p.to_text() for p in residual],
    )


@pytest.mark.slow
class TestWorkerCounts:
    @pytest.mark.parametrize("ring_name", ["fibonacci", "ising"])
    def test_step1_identical_across_worker_counts(self, request, ring_name):
        ring = request.getfixturevalue(ring_name)
        serial = _step1_snapshot(ring, 1)
        for workers in (2, 8):
            assert _step1_snapshot(ring, workers) == serial

    @pytest.mark.parametrize("workers", [1, 2, 8])
    def test_solve_verifies_for_any_worker_count(self, ising, workers):
        table, summary = solve(ising, workers=workers, check=True)
        assert summary.verified
        assert verify(table).passed
