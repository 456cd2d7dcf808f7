"""
Tests for gate comparison, group closure and weave search
"""

import json
from itertools import permutations, product

import numpy as np
import pytest

from core.errors import DataError, DomainError
from modules import linalg
from modules.braidrep import build_rep, reorder_basis
from modules.cyclo import zeta
from modules.gatelab import (
    GateTarget,
    group_closure,
    named_target,
    pattern_to_word,
    phase_distance,
    weave_search,
    word_matrix,
)

I2 = [[1, 0], [0, 1]]
X = [[0, 1], [1, 0]]
Z = [[1, 0], [0, -1]]

HADAMARD_WORD = [3, 2, 3, 3, 2, 3, 1, 2, 1, 3, 2, 3, 3, 2, 3]


@pytest.fixture(scope="module")
def fib_b3(fib_table):
    return build_rep(fib_table, "tau", "tau", 3)


class TestPhaseDistance:
    def test_orthogonal_overlap_uses_unit_phase(self):
        assert phase_distance(I2, X) == pytest.approx(2.0)

    def test_global_phase_is_ignored(self):
        assert phase_distance(1j * np.array(X), X) == pytest.approx(0.0, abs=1e-12)
        assert phase_distance(Z, I2) == pytest.approx(2.0)
        assert phase_distance([[zeta(8), 0], [0, zeta(8)]], I2) == pytest.approx(0.0, abs=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            phase_distance(I2, np.eye(3))


class TestGateTarget:
    def test_named_targets(self):
        assert named_target("iX").dimension == 2
        with pytest.raises(DomainError):
            named_target("Y")

    def test_rejects_bad_matrices(self):
        with pytest.raises(DomainError):
            GateTarget(np.ones((2, 3)))
        with pytest.raises(DomainError):
            GateTarget(np.array([[1, 1], [0, 1]]))
        with pytest.raises(DomainError):
            GateTarget(np.eye(2), mode="nearest")

    def test_json_entries(self, tmp_path):
        path = tmp_path / "y.json"
        path.write_text(json.dumps({"matrix": [[0, "0-1i"], [[0, 1], 0]], "mode": "exact-phase"}))
        target = GateTarget.from_file(path)
        assert target.name == "y"
        assert target.mode == "exact-phase"
        assert target.matrix[0, 1] == -1j
        assert target.to_dict()["matrix"][1][0] == [0.0, 1.0]

    def test_named_fallback_and_missing_files(self, tmp_path):
        assert GateTarget.from_file("ix.json").name == "iX"
        assert GateTarget.from_file("H").name == "H"
        with pytest.raises(DataError):
            GateTarget.from_file(tmp_path / "nope.json")
        empty = tmp_path / "empty.json"
        empty.write_text("{}")
        with pytest.raises(DataError):
            GateTarget.from_file(empty)


class TestClosure:
    def test_pauli_group(self):
        result = group_closure([X, Z])
        assert result.order == 8
        assert result.exact
        assert group_closure([np.array(X), np.array(Z)]).order == 8

    def test_trivial_group(self):
        assert group_closure([I2]).order == 1

    def test_cap(self):
        result = group_closure([X, Z], cap=4)
        assert result.exceeded
        assert result.to_dict()["order"] == "exceeds cap"

    def test_fibonacci_image_is_infinite(self, fib_b3):
        assert group_closure(fib_b3.generators, cap=50).exceeded

    def test_phase_is_divided_out(self):
        assert group_closure([[[zeta(8), 0], [0, -zeta(8)]]], phase=zeta(8)).order == 2


class TestWords:
    def test_pattern_to_word(self):
        assert pattern_to_word([1, -2, 3]) == [1, 1, 1, -2, -2, 1]
        assert pattern_to_word([]) == []

    def test_word_matrix(self, fib_b3):
        assert linalg.is_identity(word_matrix(fib_b3, []))
        assert linalg.is_identity(word_matrix(fib_b3, [1, -1, 2, -2]))
        scaled = word_matrix(fib_b3, [1], phase=zeta(10, 3))
        assert scaled[0][0] == 1 and scaled[1][1] == zeta(10, 3)


class TestWeave:
    def test_finds_generator_itself(self, fib_b3):
        target = GateTarget(linalg.to_numpy(fib_b3.sigma(1)), name="sigma1")
        result = weave_search(fib_b3, target, max_len=1)
        assert result.found
        assert result.pattern == [1]
        assert result.word == [1]
        assert result.distance == pytest.approx(0.0, abs=1e-9)
        assert result.searched == 8

    def test_recovers_a_known_weave(self, fib_b3):
        pattern = [2, -1, 3]
        matrix = linalg.to_numpy(word_matrix(fib_b3, pattern_to_word(pattern)))
        result = weave_search(fib_b3, GateTarget(matrix), max_len=3, tol=1e-6)
        assert result.found
        assert len(result.pattern) <= 3
        assert phase_distance(result.matrix, matrix) < 1e-6

    def test_miss(self, fib_b3):
        result = weave_search(fib_b3, named_target("iX"), max_len=1, tol=1e-6)
        assert not result.found
        assert result.to_dict()["word"] is None

    def test_argument_checks(self, fib_b3):
        with pytest.raises(DomainError):
            weave_search(fib_b3, GateTarget(np.eye(3)), max_len=1)
        with pytest.raises(DomainError):
            weave_search(fib_b3, named_target("X"), max_len=-1)
        with pytest.raises(DomainError):
            weave_search(fib_b3, named_target("X"), max_len=1, exponents=[0, 1])

    @pytest.mark.slow
    def test_parallel_search_matches_serial(self, fib_b3):
        target = named_target("iX")
        serial = weave_search(fib_b3, target, max_len=4, tol=0.3)
        parallel = weave_search(fib_b3, target, max_len=4, tol=0.3, workers=2)
        assert parallel.found == serial.found
        assert parallel.pattern == serial.pattern


def _dft3():
    w = np.exp(2j * np.pi / 3)
    return np.array([[w ** (j * k) for k in range(3)] for j in range(3)]) / np.sqrt(3)


@pytest.mark.slow
class TestSU24Gates:
    @pytest.fixture(scope="class")
    def rep(self, su2_4_table):
        return reorder_basis(build_rep(su2_4_table, "X_e", "Y", 4), [0, 2, 1])

    def test_group_order_modulo_phase(self, rep):
        assert group_closure(rep.generators, phase=zeta(48, 2)).order == 648

    def test_hadamard_word(self, rep):
        h = linalg.to_numpy(word_matrix(rep, HADAMARD_WORD, phase=zeta(48, 2)))
        target = _dft3()
        best = min(
            phase_distance(np.diag(signs) @ h[np.ix_(perm, perm)] @ np.diag(signs), target)
            for signs in product((1, -1), repeat=3)
            for perm in permutations(range(3))
        )
        assert best < 1e-8
