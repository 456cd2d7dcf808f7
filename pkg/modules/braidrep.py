"""
Braid Representations
Computational basis of Hom(a^m, b) and exact matrices of the braid generators
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

import config
from core.errors import DataError, DomainError
from modules import linalg
from modules.catalog import FusionRingData, Label
from modules.fsolve import FSymbolTable

logger = logging.getLogger(__name__)

LabelLike = Union[Label, int, str]
Matrix = List[List[object]]


@dataclass(frozen=True)
class BasisState:
    """
    One fusion tree of a^m into b

    t holds the pair-fusion labels t_1..t_r; chain holds the intermediate labels
    l_1.. of the left-associated chain (t_1 t_2) -> l_1, (l_1 t_3) -> l_2, ...
    """

    t: Tuple[Label, ...]
    chain: Tuple[Label, ...]

    @property
    def key(self) -> Tuple[int, ...]:
        return tuple(x.index for x in self.t + self.chain)

    def __str__(self) -> str:
        return "(" + ",".join(x.name for x in self.t + self.chain) + ")"


@dataclass
class BraidRep:
    """Exact images of sigma_1..sigma_{m-1} on the computational basis"""

    ring: FusionRingData
    anyon: Label
    root: Label
    strands: int
    basis: List[BasisState]
    generators: List[Matrix]
    inverses: List[Matrix] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def sigma(self, j: int) -> Matrix:
        """sigma_j for j > 0, its inverse for j < 0."""
        if j == 0 or abs(j) > len(self.generators):
            raise DomainError(f"generator index {j} outside 1..{len(self.generators)}")
        return self.generators[j - 1] if j > 0 else self.inverses[-j - 1]

    def numeric(self) -> List[np.ndarray]:
        return [linalg.to_numpy(g) for g in self.generators]

    def basis_line(self) -> str:
        return " ".join(str(s) for s in self.basis)


def comp_basis(ring: FusionRingData, a: LabelLike, b: LabelLike, m: int) -> List[BasisState]:
    """
    Enumerate the computational basis of Hom(a^m, b)

    Args:
        ring: Fusion ring
        a: Strand label
        b: Total charge
        m: Strand count (at least 3)

    Returns:
        States in decreasing lexicographic order of their label indices
    """
    if m < 3:
        raise DomainError(f"braid representations need at least 3 strands, got {m}")
    a, b = ring.index_of(a), ring.index_of(b)
    r = m // 2
    pairs = ring.fuse_indices(a, a)
    states = []
    for t in product(pairs, repeat=r):
        for chain in _chains(ring, t):
            top = chain[-1]
            if m % 2 == 0:
                if top != b:
                    continue
                inner = chain[1:-1]
            else:
                if (top, a, b) not in ring.triples:
                    continue
                inner = chain[1:]
            states.append((t, inner))
    states.sort(key=lambda s: s[0] + s[1], reverse=True)
    labels = ring.labels
    return [BasisState(tuple(labels[x] for x in t), tuple(labels[x] for x in inner)) for t, inner in states]


def _chains(ring: FusionRingData, t: Sequence[int]) -> List[Tuple[int, ...]]:
    """All full chains L_1 = t_1, L_j in L_{j-1} x t_j."""
    chains = [(t[0],)]
    for tj in t[1:]:
        chains = [c + (x,) for c in chains for x in ring.fuse_indices(c[-1], tj)]
    return chains


class _Blocks:
    """Cached F-blocks, their inverses and the three-strand sigma_2 blocks"""

    def __init__(self, table: FSymbolTable, a: int):
        self.table = table
        self.ring = table.ring
        self.a = a
        self.zero = table.tower.zero()
        self._f: Dict[tuple, Tuple[Dict, Dict]] = {}
        self._s: Dict[int, Dict] = {}

    def f(self, x: int, y: int, z: int, w: int) -> Tuple[Dict, Dict]:
        """(F, F^-1) of F^{xyz}_w as dicts keyed (row, col) by label index."""
        key = (x, y, z, w)
        if key not in self._f:
            ring = self.ring
            rows = [e for e in ring.fuse_indices(x, y) if (e, z, w) in ring.triples]
            cols = [f for f in ring.fuse_indices(y, z) if (x, f, w) in ring.triples]
            if not rows:
                self._f[key] = ({}, {})
            else:
                if len(rows) != len(cols):
                    raise DataError(f"F-block {key} is not square")
                entries = [[self.table.entry((x, y, z, w, e, f)) for f in cols] for e in rows]
                try:
                    inverse = linalg.inverse(entries)
                except DomainError:
                    raise DataError(f"F-block {key} is singular")
                fwd = {(e, f): entries[i][j] for i, e in enumerate(rows) for j, f in enumerate(cols)}
                inv = {(f, e): inverse[j][i] for i, e in enumerate(rows) for j, f in enumerate(cols)}
                self._f[key] = (fwd, inv)
        return self._f[key]

    def s(self, c: int) -> Dict[Tuple[int, int], object]:
        """S^c[y][x] = sum_d F^{aaa}_c[x][d] R^{aa}_d (F^{aaa}_c)^-1[d][y]."""
        if c not in self._s:
            a = self.a
            fwd, inv = self.f(a, a, a, c)
            rows = sorted({e for e, _ in fwd})
            cols = sorted({f for _, f in fwd})
            block = {}
            for x in rows:
                for y in rows:
                    total = self.zero
                    for d in cols:
                        total = total + fwd[(x, d)] * self.ring.r_symbol(a, a, d) * inv[(d, y)]
                    block[(y, x)] = total
            self._s[c] = block
        return self._s[c]

    def m4(self, c: int, out: Tuple[int, int], inp: Tuple[int, int]):
        """sigma_2 on ((a a)_{t1} (a a)_{t2})_c from (t1, t2) to (t1', t2')."""
        a = self.a
        (t1p, t2p), (t1, t2) = out, inp
        _, inv_in = self.f(t1, a, a, c)
        fwd_out, _ = self.f(t1p, a, a, c)
        total = self.zero
        for e in self.ring.fuse_indices(t1, a):
            left = inv_in.get((t2, e))
            right = fwd_out.get((e, t2p))
            if left is None or right is None:
                continue
            s = self.s(e).get((t1p, t1))
            if s is None:
                continue
            total = total + left * s * right
        return total


def _full_chain(state_key: Sequence[int], r: int, m: int, b: int) -> List[int]:
    t = list(state_key[:r])
    inner = list(state_key[r:])
    chain = [t[0]] + inner
    if m % 2 == 0:
        chain.append(b)
    return chain


def sigma_odd(ring: FusionRingData, basis: Sequence[BasisState], a: LabelLike, j: int) -> Matrix:
    """Diagonal image of sigma_j (j odd): R^{aa}_{t_k} with k = (j + 1) / 2."""
    a = ring.index_of(a)
    if j % 2 == 0 or j < 1:
        raise DomainError(f"sigma_{j} is not an odd generator")
    k = (j + 1) // 2
    n = len(basis)
    if basis and k > len(basis[0].t):
        raise DomainError(f"sigma_{j} is out of range for {2 * len(basis[0].t)} or more strands")
    zero = ring.r_symbol(a, a, ring.fuse_indices(a, a)[0]) * 0
    matrix = [[zero] * n for _ in range(n)]
    for i, state in enumerate(basis):
        matrix[i][i] = ring.r_symbol(a, a, state.t[k - 1].index)
    return matrix


def sigma2_b3(table: FSymbolTable, a: LabelLike, b: LabelLike) -> Matrix:
    """sigma_2 on Hom(a^3, b): F^{aaa}_b diag(R^{aa}) (F^{aaa}_b)^-1 in the comp_basis order."""
    ring = table.ring
    basis = comp_basis(ring, a, b, 3)
    a, b = ring.index_of(a), ring.index_of(b)
    block = _Blocks(table, a).s(b)
    keys = [s.key[0] for s in basis]
    return [[block[(y, x)] for x in keys] for y in keys]


def sigma2_b4(table: FSymbolTable, a: LabelLike, b: LabelLike) -> Matrix:
    """sigma_2 on Hom(a^4, b) over the (t_1, t_2) basis in comp_basis order."""
    ring = table.ring
    basis = comp_basis(ring, a, b, 4)
    a, b = ring.index_of(a), ring.index_of(b)
    blocks = _Blocks(table, a)
    keys = [s.key for s in basis]
    return [[blocks.m4(b, out, inp) for inp in keys] for out in keys]


def sigma_even(table: FSymbolTable, a: LabelLike, b: LabelLike, m: int, j: int,
               basis: Optional[Sequence[BasisState]] = None, blocks: Optional[_Blocks] = None) -> Matrix:
    """
    Image of sigma_j (j even) on Hom(a^m, b)

    Only labels of the coupled strands change: (t_k, t_{k+1}, l_k) for interior
    generators, (t_r, l_r) for the last generator of an odd strand count.
    """
    ring = table.ring
    if j % 2 or j < 2 or j > m - 1:
        raise DomainError(f"sigma_{j} is not an even generator of B_{m}")
    basis = list(basis) if basis is not None else comp_basis(ring, a, b, m)
    a, b = ring.index_of(a), ring.index_of(b)
    blocks = blocks or _Blocks(table, a)
    zero = table.tower.zero()
    r = m // 2
    k = j // 2
    keys = [s.key for s in basis]
    chains = [_full_chain(key, r, m, b) for key in keys]
    tail = m % 2 == 1 and k == r

    matrix = []
    for key_out, chain_out in zip(keys, chains):
        row = []
        for key_in, chain_in in zip(keys, chains):
            t_out, t_in = key_out[:r], key_in[:r]
            if tail:
                same = t_out[:r - 1] == t_in[:r - 1] and chain_out[:r - 1] == chain_in[:r - 1]
            else:
                same = (t_out[:k - 1] == t_in[:k - 1] and t_out[k + 1:] == t_in[k + 1:]
                        and chain_out[:k - 1] == chain_in[:k - 1] and chain_out[k:] == chain_in[k:])
            if not same:
                row.append(zero)
                continue
            if tail:
                row.append(_tail_entry(blocks, r, t_in, t_out, chain_in, chain_out, b))
            else:
                row.append(_interior_entry(blocks, k, t_in, t_out, chain_in, chain_out))
        matrix.append(row)
    return matrix


def _interior_entry(blocks: _Blocks, k: int, t_in, t_out, chain_in, chain_out):
    # strands 2k and 2k+1; pairs k and k+1 (1-based)
    tj, tj1 = t_in[k - 1], t_in[k]
    tjp, tj1p = t_out[k - 1], t_out[k]
    if k == 1:
        top = chain_in[1]
        return blocks.m4(top, (tjp, tj1p), (tj, tj1))
    below = chain_in[k - 2]
    top = chain_in[k]
    lj, ljp = chain_in[k - 1], chain_out[k - 1]
    fwd_in, _ = blocks.f(below, tj, tj1, top)
    _, inv_out = blocks.f(below, tjp, tj1p, top)
    total = blocks.zero
    for c in blocks.ring.fuse_indices(tj, tj1):
        left = fwd_in.get((lj, c))
        right = inv_out.get((c, ljp))
        if left is None or right is None:
            continue
        total = total + left * blocks.m4(c, (tjp, tj1p), (tj, tj1)) * right
    return total


def _tail_entry(blocks: _Blocks, r: int, t_in, t_out, chain_in, chain_out, b: int):
    # strands 2r and 2r+1: last pair and the lone a
    tr, trp = t_in[r - 1], t_out[r - 1]
    if r == 1:
        return blocks.s(b).get((trp, tr), blocks.zero)
    below = chain_in[r - 2]
    lr, lrp = chain_in[r - 1], chain_out[r - 1]
    a = blocks.a
    fwd_in, _ = blocks.f(below, tr, a, b)
    _, inv_out = blocks.f(below, trp, a, b)
    total = blocks.zero
    for c in blocks.ring.fuse_indices(tr, a):
        left = fwd_in.get((lr, c))
        right = inv_out.get((c, lrp))
        s = blocks.s(c).get((trp, tr))
        if left is None or right is None or s is None:
            continue
        total = total + left * s * right
    return total


def build_rep(table: FSymbolTable, a: LabelLike, b: LabelLike, m: int) -> BraidRep:
    """
    Assemble the braid group representation on Hom(a^m, b)

    Args:
        table: Complete F-symbol table
        a: Strand label
        b: Total charge
        m: Strand count

    Returns:
        Representation with all m-1 generators and their inverses
    """
    ring = table.ring
    basis = comp_basis(ring, a, b, m)
    if not basis:
        raise DomainError(f"Hom({ring.label(a)}^{m}, {ring.label(b)}) is zero-dimensional")
    one = table.tower.one()
    blocks = _Blocks(table, ring.index_of(a))
    generators = []
    for j in range(1, m):
        if j % 2:
            g = [[one * x for x in row] for row in sigma_odd(ring, basis, a, j)]
        else:
            g = sigma_even(table, a, b, m, j, basis, blocks)
        generators.append(g)
    inverses = [linalg.inverse(g) for g in generators]
    logger.info(f"Built {ring.name} rep of B_{m} on Hom({ring.label(a)}^{m}, {ring.label(b)}): dimension {len(basis)}")
    return BraidRep(ring, ring.label(a), ring.label(b), m, basis, generators, inverses)


def reorder_basis(rep: BraidRep, order: Sequence[int]) -> BraidRep:
    """New basis position i holds the old state order[i]; generators are conjugated to match."""
    n = rep.dimension
    if sorted(order) != list(range(n)):
        raise DomainError(f"{list(order)} is not a reordering of {n} states")
    moves = [0] * n
    for i, old in enumerate(order):
        moves[old] = i
    return BraidRep(
        rep.ring, rep.anyon, rep.root, rep.strands,
        [rep.basis[i] for i in order],
        [linalg.permute(g, moves) for g in rep.generators],
        [linalg.permute(g, moves) for g in rep.inverses],
    )


def check_braid_relations(generators: Sequence[Matrix]) -> List[Tuple[str, int, int]]:
    """Exact check of both braid relations; returns the failing (relation, i, j) triples."""
    failures = []
    n = len(generators)
    for i in range(n):
        for j in range(i + 1, n):
            gi, gj = generators[i], generators[j]
            if j == i + 1:
                lhs = linalg.matmul(linalg.matmul(gi, gj), gi)
                rhs = linalg.matmul(linalg.matmul(gj, gi), gj)
                if not linalg.equal(lhs, rhs):
                    failures.append(("yang-baxter", i + 1, j + 1))
            elif not linalg.equal(linalg.matmul(gi, gj), linalg.matmul(gj, gi)):
                failures.append(("commute", i + 1, j + 1))
    return failures


def unitarity_defect(rep: BraidRep, precision_bits: Optional[int] = None) -> float:
    """max_j ||sigma_j^H sigma_j - I||_inf under the embedding."""
    bits = precision_bits or config.PRECISION_BITS
    worst = mpmath.mpf(0)
    with mpmath.workprec(bits + 16):
        for g in rep.generators:
            m = linalg.to_mpmath(g, bits)
            defect = m.H * m - mpmath.eye(rep.dimension)
            worst = max(worst, mpmath.mnorm(defect, "inf"))
    return float(worst)


def export_rep(rep: BraidRep, fmt: str = "json", precision_bits: int = 53) -> Union[dict, str]:
    """Embedded generator matrices as a JSON-ready dict or plain text."""
    digits = max(6, int(precision_bits * 0.30103))
    matrices = []
    with mpmath.workprec(precision_bits + 16):
        for g in rep.generators:
            m = linalg.to_mpmath(g, precision_bits)
            matrices.append([[(mpmath.nstr(m[i, j].real, digits), mpmath.nstr(m[i, j].imag, digits))
                              for j in range(m.cols)] for i in range(m.rows)])
    if fmt == "json":
        return {
            "ring": rep.ring.name,
            "anyon": rep.anyon.name,
            "root": rep.root.name,
            "strands": rep.strands,
            "basis": [[x.name for x in s.t + s.chain] for s in rep.basis],
            "generators": [[[[float(re), float(im)] for re, im in row] for row in m] for m in matrices],
            "exact": [[[str(x) for x in row] for row in g] for g in rep.generators],
        }
    if fmt != "text":
        raise DomainError(f"unknown export format {fmt!r}")
    lines = [f"basis: {rep.basis_line()}"]
    for j, m in enumerate(matrices, start=1):
        lines.append(f"sigma_{j}:")
        for row in m:
            lines.append("  " + "  ".join(f"{re}{'+' if not im.startswith('-') else ''}{im}i" for re, im in row))
    return "\n".join(lines)
