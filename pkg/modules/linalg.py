"""
Exact Dense Matrices
Small square matrices over cyclotomic and radical-tower numbers, stored as lists of rows
"""

from fractions import Fraction
from typing import List, Sequence

import mpmath
import numpy as np

from core.errors import DomainError
from modules import cyclo

Matrix = List[List[object]]


def identity(n: int, one=1) -> Matrix:
    zero = one * 0
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int, zero=0) -> Matrix:
    return [[zero for _ in range(cols)] for _ in range(rows)]


def shape(m: Matrix) -> tuple:
    return (len(m), len(m[0]) if m else 0)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != shape(b)[0]:
        raise DomainError(f"cannot multiply {shape(a)} by {shape(b)}")
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            total = None
            for x, y in zip(row, col):
                if not x or not y:
                    continue
                total = x * y if total is None else total + x * y
            out_row.append(total if total is not None else row[0] * 0)
        out.append(out_row)
    return out


def matpow(a: Matrix, n: int, one=1) -> Matrix:
    """Integer power; negative powers go through the inverse."""
    if n < 0:
        return matpow(inverse(a), -n, one)
    result = identity(len(a), one)
    base = a
    while n:
        if n & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        n >>= 1
    return result


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def scale(a: Matrix, c) -> Matrix:
    return [[x * c for x in row] for row in a]


def divide(a: Matrix, c) -> Matrix:
    inv = Fraction(1) / c if isinstance(c, (int, Fraction)) else c.inverse()
    return scale(a, inv)


def equal(a: Matrix, b: Matrix) -> bool:
    if shape(a) != shape(b):
        return False
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_identity(a: Matrix) -> bool:
    return all(x == (1 if i == j else 0) for i, row in enumerate(a) for j, x in enumerate(row))


def _reciprocal(x):
    return x.inverse() if hasattr(x, "inverse") else Fraction(1) / x


def _gauss_jordan(work: Matrix, n: int) -> Matrix:
    """Reduce the left n columns of an augmented matrix to the identity, in place."""
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise DomainError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = _reciprocal(work[col][col])
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return work


def _check_square(a: Matrix, action: str) -> int:
    n, m = shape(a)
    if n != m:
        raise DomainError(f"cannot {action} a {n}x{m} matrix")
    if not any(x for row in a for x in row):
        raise DomainError(f"cannot {action} the zero matrix")
    return n


def inverse(a: Matrix) -> Matrix:
    """
    Gauss-Jordan inverse over an exact field

    Raises:
        DomainError: the matrix is singular or not square
    """
    n = _check_square(a, "invert")
    pivot = next(x for row in a for x in row if x)
    one = pivot * _reciprocal(pivot)
    work = [list(row) + identity(n, one)[i] for i, row in enumerate(a)]
    return [row[n:] for row in _gauss_jordan(work, n)]


def solve(a: Matrix, b: Sequence[object]) -> List[object]:
    """Unique x with a x = b over an exact field; DomainError when a is singular."""
    n = _check_square(a, "solve with")
    if len(b) != n:
        raise DomainError(f"right-hand side has {len(b)} entries, expected {n}")
    work = [list(row) + [b[i]] for i, row in enumerate(a)]
    return [row[n] for row in _gauss_jordan(work, n)]


def permute(a: Matrix, perm: Sequence[int]) -> Matrix:
    """P A P^-1 where basis state i moves to position perm[i]."""
    n = len(a)
    if sorted(perm) != list(range(n)):
        raise DomainError(f"{list(perm)} is not a permutation of 0..{n - 1}")
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[perm[i]][perm[j]] = a[i][j]
    return out


def to_numpy(a: Matrix) -> np.ndarray:
    return np.array([[complex(cyclo.embed(x)) for x in row] for row in a], dtype=np.complex128)


def to_mpmath(a: Matrix, precision_bits: int = 128) -> mpmath.matrix:
    with mpmath.workprec(precision_bits + 16):
        return mpmath.matrix([[cyclo.embed(x, precision_bits) for x in row] for row in a])
