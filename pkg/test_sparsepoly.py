"""
Tests for sparse polynomials, reductions and the equations graph
"""

from fractions import Fraction

import pytest

from core.errors import DomainError
from modules.cyclo import zeta
from modules.sparsepoly import (
    SparsePoly,
    degrevlex_key,
    equations_graph,
    partition_polynomials,
    update_reduce,
)


def xs(n):
    return [SparsePoly.variable(i, n) for i in range(n)]


def test_degrevlex_order():
    x0, x1, x2 = xs(3)
    assert (x0 + x1).leading_monomial == ((0, 1),)
    # equal degree: the smaller exponent in the last variable wins
    assert degrevlex_key(((1, 2),)) > degrevlex_key(((0, 1), (2, 1)))
    assert (x0 + x1 * x1).leading_monomial == ((1, 2),)
    terms = [e for e, _ in (x0 * x1 + x2 + 5).terms]
    assert terms == [((0, 1), (1, 1)), ((2, 1),), ()]


def test_arithmetic_and_constants():
    x0, x1 = xs(2)
    p = (x0 + 1) * (x0 - 1)
    assert p == x0 ** 2 - 1
    assert (p - p).is_zero()
    assert SparsePoly.constant(3, 2) == 3
    assert (2 * x1).monic() == x1
    assert (x0 * zeta(4)).leading_coefficient == zeta(4)


def test_variable_out_of_range():
    with pytest.raises(DomainError):
        SparsePoly.variable(3, 3)


def test_substitute_triangular():
    x0, x1, x2 = xs(3)
    p = x0 * x1 + x0
    assert p.substitute({0: 3 * x2}) == 3 * x1 * x2 + 3 * x2
    assert p.substitute({0: SparsePoly.constant(2, 3)}) == 2 * x1 + 2


def test_substitute_rejects_non_triangular():
    x0, x1, x2 = xs(3)
    with pytest.raises(DomainError):
        (x2 + 1).substitute({2: x0})


def test_reduce_squares():
    x0, x1 = xs(2)
    assert (x1 ** 3).reduce_squares({1: 5}) == 5 * x1
    assert (x0 * x1 ** 4).reduce_squares({1: 2}) == 4 * x0


def test_divide_gcd_only_by_nonzero_variables():
    x0, x1 = xs(2)
    p = x0 * x1 + x0 ** 2
    assert p.divide_gcd({0}) == x1 + x0
    assert p.divide_gcd(set()) == p
    assert p.divide_gcd({1}) == p


def test_update_reduce_pipeline():
    x0, x1, x2 = xs(3)
    p = 2 * x0 * x1 ** 2 + 4 * x0 * x2
    reduced = update_reduce(p, known_squares={1: 3}, assignments={}, nonzero={0})
    assert reduced == SparsePoly(3, {((2, 1),): 1, (): Fraction(3, 2)})


def test_update_reduce_substitutes_first():
    x0, x1 = xs(2)
    p = x0 * x0 - 2
    assert update_reduce(p, known_squares={1: 2}, assignments={0: x1}, nonzero=()) == 0


def test_update_reduce_is_idempotent():
    x0, x1, x2, x3 = xs(4)
    state = dict(
        known_squares={1: 2, 3: zeta(8)},
        assignments={0: 2 * x1 * x3, 2: x3 + 1},
        nonzero={3},
    )
    for p in (x0 * x2 + x1 ** 3, 3 * x0 ** 2 - x1 * x2 * x3, x2 ** 2 * x3 + 5 * x3 ** 3, x0 * zeta(8) + x1 * x3):
        once = update_reduce(p, **state)
        assert update_reduce(once, **state) == once


def test_evaluate():
    x0, x1 = xs(2)
    assert (x0 * x1 + 1).evaluate({0: 2, 1: 3}) == 7
    with pytest.raises(DomainError):
        x0.evaluate({})


def test_equations_graph_edges_follow_terms():
    x0, x1, x2, x3 = xs(4)
    graph = equations_graph([x0 * x1 + 1, x2 + x3])
    assert graph.edges() == {(0, 1)}
    assert graph.components == [[0, 1], [2], [3]]
    assert graph.component_of(1) == [0, 1]


def test_partition_polynomials():
    x0, x1, x2, x3 = xs(4)
    polys = [x0 * x1 + 1, x1 + x2, x3 - 1, SparsePoly.constant(0, 4)]
    parts = partition_polynomials(polys)
    assert [variables for variables, _ in parts] == [[0, 1, 2], [3]]
    assert parts[0][1] == [x0 * x1 + 1, x1 + x2]
    assert parts[1][1] == [x3 - 1]
