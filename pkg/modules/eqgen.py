"""
Equation Generator
Builds pentagon, hexagon and orthogonality constraints over the F-symbol unknowns
"""

import logging
from dataclasses import dataclass
from functools import partial
from itertools import product
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from core.errors import DomainError
from modules.catalog import FusionRingData, Sextuple, index_sextuples
from modules.cyclo import CycloNumber
from modules.sparsepoly import SparsePoly
from services.worker_pool import WorkerPool

logger = logging.getLogger(__name__)

KINDS = ("hexagon", "pentagon", "orthogonality", "mixed")


@dataclass(frozen=True)
class Relation:
    """
    One axiom instance as a sum of products of F-entries

    Each summand is (coefficient, factors); factors are admissible sextuples and the
    relation reads sum(coefficient * prod F[factor]) = 0.
    """

    kind: str
    origin: Tuple[int, ...]
    summands: Tuple[Tuple[object, Tuple[Sextuple, ...]], ...]


def nonuple_count(ring: FusionRingData) -> int:
    """Size of the pentagon loop domain (N^9)."""
    return ring.rank ** 9


def hexagon_tuple_count(ring: FusionRingData) -> int:
    """Size of the hexagon loop domain (N^6)."""
    return ring.rank ** 6


def _mixed_radix(labels: Sequence[int], n: int) -> int:
    idx = 0
    for x in labels:
        idx = idx * n + x
    return idx


def iter_pentagons(ring: FusionRingData, worker: int = 0, workers: int = 1) -> Iterator[Tuple[int, Relation]]:
    """
    Pentagon relations handled by one worker stripe

    Nonuples (a,b,c,d,e,f,g,k,l) are indexed in mixed radix N^9; worker w keeps
    the indices congruent to w modulo the worker count.
    """
    n = ring.rank
    t = ring.triples
    fuse = ring.fuse_indices
    for a, b, c, d, e in product(range(n), repeat=5):
        for f in fuse(a, b):
            for g in fuse(f, c):
                for l in fuse(c, d):
                    for k in fuse(b, l):
                        idx = _mixed_radix((a, b, c, d, e, f, g, k, l), n)
                        if idx % workers != worker:
                            continue
                        summands = []
                        # [F^{fcd}_e]_{gl} [F^{abl}_e]_{fk}
                        if (g, d, e) in t and (f, l, e) in t and (a, k, e) in t:
                            summands.append((1, ((f, c, d, e, g, l), (a, b, l, e, f, k))))
                        # sum_h [F^{abc}_g]_{fh} [F^{ahd}_e]_{gk} [F^{bcd}_k]_{hl}
                        for h in fuse(b, c):
                            if (a, h, g) in t and (h, d, k) in t and (g, d, e) in t and (a, k, e) in t:
                                summands.append((-1, ((a, b, c, g, f, h), (a, h, d, e, g, k), (b, c, d, k, h, l))))
                        if summands:
                            yield idx, Relation("pentagon", (a, b, c, d, e, f, g, k, l), tuple(summands))


def iter_hexagons(ring: FusionRingData, sign: int = 1, worker: int = 0, workers: int = 1) -> Iterator[Tuple[int, Relation]]:
    """
    Hexagon relations for one braiding chirality

    (R^{ac}_e)^s [F^{acb}_d]_{eg} (R^{bc}_g)^s = sum_f [F^{cab}_d]_{ef} (R^{fc}_d)^s [F^{abc}_d]_{fg}
    """
    if sign not in (1, -1):
        raise DomainError(f"hexagon sign must be +1 or -1, got {sign}")
    r = ring.r_symbol if sign == 1 else ring.r_inverse
    n = ring.rank
    t = ring.triples
    fuse = ring.fuse_indices
    for a, b, c, d in product(range(n), repeat=4):
        for e in fuse(a, c):
            for g in fuse(b, c):
                idx = _mixed_radix((a, b, c, d, e, g), n)
                if idx % workers != worker:
                    continue
                summands = []
                if (e, b, d) in t and (a, g, d) in t:
                    summands.append((r(a, c, e) * r(b, c, g), ((a, c, b, d, e, g),)))
                for f in fuse(a, b):
                    if (e, b, d) in t and (c, f, d) in t and (f, c, d) in t and (a, g, d) in t:
                        summands.append((-r(f, c, d), ((c, a, b, d, e, f), (a, b, c, d, f, g))))
                if summands:
                    yield idx, Relation("hexagon", (a, b, c, d, e, g, sign), tuple(summands))


def iter_orthogonality(ring: FusionRingData) -> Iterator[Tuple[int, Relation]]:
    """Column-pair relations of F^T F = I for every nonvacuum block."""
    n = ring.rank
    t = ring.triples
    fuse = ring.fuse_indices
    count = 0
    for a, b, c, d in product(range(n), repeat=4):
        if ring.has_vacuum(a, b, c):
            continue
        rows = [e for e in fuse(a, b) if (e, c, d) in t]
        cols = [f for f in fuse(b, c) if (a, f, d) in t]
        if not rows or not cols:
            continue
        for i, f in enumerate(cols):
            for f2 in cols[i:]:
                summands = [(1, ((a, b, c, d, e, f), (a, b, c, d, e, f2))) for e in rows]
                if f == f2:
                    summands.append((-1, ()))
                yield count, Relation("orthogonality", (a, b, c, d, f, f2), tuple(summands))
                count += 1


def evaluate_relation(relation: Relation, entry: Callable[[Sextuple], object], one):
    """
    Evaluate a relation with an entry provider

    Args:
        relation: Relation to evaluate
        entry: Maps an admissible sextuple to its value (polynomial or number)
        one: Multiplicative identity of the target ring

    Returns:
        Sum of the summands (zero of the target ring when empty)
    """
    total = None
    for coefficient, factors in relation.summands:
        term = one * coefficient
        for s in factors:
            term = term * entry(s)
        total = term if total is None else total + term
    return one * 0 if total is None else total


def fixed_assignments(ring: FusionRingData) -> Dict[Sextuple, int]:
    """Admissible entries with a vacuum among (a, b, c); all equal 1."""
    n = ring.rank
    fixed = {}
    for a, b, c, d, e, f in product(range(n), repeat=6):
        if ring.has_vacuum(a, b, c) and ring.admissible(a, b, c, d, e, f):
            fixed[(a, b, c, d, e, f)] = 1
    return fixed


class PolynomialEntries:
    """Entry provider mapping sextuples to polynomials over the unknowns"""

    def __init__(self, ring: FusionRingData, values: Optional[Mapping[int, SparsePoly]] = None):
        self.ring = ring
        self.sextuples, self.index = index_sextuples(ring)
        self.nvars = len(self.sextuples)
        self.one = CycloNumber.one(ring.cyclo_order)
        self.unit = SparsePoly.constant(self.one, self.nvars)
        self.values = values or {}

    def __call__(self, s: Sextuple) -> SparsePoly:
        i = self.index.get(s)
        if i is None:
            if self.ring.has_vacuum(s[0], s[1], s[2]):
                return self.unit
            raise DomainError(f"{s} is not an admissible sextuple")
        value = self.values.get(i)
        if value is None:
            return SparsePoly.variable(i, self.nvars, self.one)
        return value


class EquationSystem:
    """Deduplicated polynomial system with per-polynomial provenance"""

    def __init__(self, ring: FusionRingData, kind: str, nvars: int):
        if kind not in KINDS:
            raise DomainError(f"unknown system kind {kind!r}")
        self.ring = ring
        self.kind = kind
        self.nvars = nvars
        self.polynomials: List[SparsePoly] = []
        self.provenance: List[Tuple[int, ...]] = []
        self.generated = 0
        self._seen: Dict[SparsePoly, int] = {}

    def add(self, poly: SparsePoly, origin: Tuple[int, ...]) -> bool:
        self.generated += 1
        if not poly:
            return False
        canonical = poly.monic()
        if canonical in self._seen:
            return False
        self._seen[canonical] = len(self.polynomials)
        self.polynomials.append(canonical)
        self.provenance.append(origin)
        return True

    def merge(self, other: "EquationSystem") -> "EquationSystem":
        merged = EquationSystem(self.ring, "mixed" if other.kind != self.kind else self.kind, self.nvars)
        for source in (self, other):
            for poly, origin in zip(source.polynomials, source.provenance):
                merged.add(poly, origin)
            merged.generated += source.generated - len(source.polynomials)
        return merged

    def origin_of(self, poly: SparsePoly) -> Optional[Tuple[int, ...]]:
        i = self._seen.get(poly.monic())
        return None if i is None else self.provenance[i]

    def to_lines(self) -> List[str]:
        sextuples, _ = index_sextuples(self.ring)
        names = self.ring.names

        def namer(i: int) -> str:
            return "F[" + ",".join(names[x] for x in sextuples[i]) + "]"

        return [p.to_text(namer) for p in self.polynomials]

    def __len__(self) -> int:
        return len(self.polynomials)

    def __iter__(self):
        return iter(self.polynomials)


def _pentagon_stripe(ring: FusionRingData, values, workers: int, worker: int) -> List[Tuple[int, tuple, SparsePoly]]:
    entries = PolynomialEntries(ring, values)
    out = []
    for idx, rel in iter_pentagons(ring, worker, workers):
        out.append((idx, rel.origin, evaluate_relation(rel, entries, entries.unit)))
    return out


def _hexagon_stripe(ring: FusionRingData, sign: int, workers: int, worker: int) -> List[Tuple[int, tuple, SparsePoly]]:
    entries = PolynomialEntries(ring)
    out = []
    for idx, rel in iter_hexagons(ring, sign, worker, workers):
        out.append((idx, rel.origin, evaluate_relation(rel, entries, entries.unit)))
    return out


def _collect(system: EquationSystem, stripes: List[List[Tuple[int, tuple, SparsePoly]]]) -> EquationSystem:
    merged = sorted((item for stripe in stripes for item in stripe), key=lambda item: item[0])
    for _, origin, poly in merged:
        system.add(poly, origin)
    return system


def gen_pentagon(
    ring: FusionRingData,
    values: Optional[Mapping[int, SparsePoly]] = None,
    workers: int = 1,
    post: Optional[Callable[[SparsePoly], SparsePoly]] = None,
) -> EquationSystem:
    """
    Generate the pentagon system

    Args:
        ring: Fusion ring
        values: Optional substitution applied at creation (variable -> polynomial)
        workers: Number of generation stripes
        post: Optional reduction applied to each polynomial before deduplication

    Returns:
        Deduplicated pentagon system
    """
    entries = PolynomialEntries(ring)
    system = EquationSystem(ring, "pentagon", entries.nvars)
    pool = WorkerPool(workers)
    stripes = pool.stripe_map(partial(_pentagon_stripe, ring, dict(values or {}), pool.workers))
    if post is not None:
        stripes = [[(idx, origin, post(p)) for idx, origin, p in stripe] for stripe in stripes]
    _collect(system, stripes)
    logger.info(f"Generated {len(system)} pentagon equations for {ring.name} ({system.generated} before dedup)")
    return system


def gen_hexagon(ring: FusionRingData, sign: Optional[int] = None, workers: int = 1) -> EquationSystem:
    """
    Generate the hexagon system for one sign, or both when sign is None
    """
    entries = PolynomialEntries(ring)
    signs = (1, -1) if sign is None else (sign,)
    system = EquationSystem(ring, "hexagon", entries.nvars)
    pool = WorkerPool(workers)
    for s in signs:
        _collect(system, pool.stripe_map(partial(_hexagon_stripe, ring, s, pool.workers)))
    logger.info(f"Generated {len(system)} hexagon equations for {ring.name} (signs {signs})")
    return system


def gen_orthogonality(ring: FusionRingData) -> EquationSystem:
    entries = PolynomialEntries(ring)
    system = EquationSystem(ring, "orthogonality", entries.nvars)
    for _, rel in iter_orthogonality(ring):
        system.add(evaluate_relation(rel, entries, entries.unit), rel.origin)
    return system


def pentagon_residual(ring: FusionRingData, entry: Callable[[Sextuple], object], one) -> Iterator[Tuple[tuple, object]]:
    """Yield (nonuple, LHS - RHS) for every pentagon relation under the given entries."""
    for _, rel in iter_pentagons(ring):
        yield rel.origin, evaluate_relation(rel, entry, one)


def hexagon_residual(ring: FusionRingData, entry: Callable[[Sextuple], object], one, sign: int = 1) -> Iterator[Tuple[tuple, object]]:
    for _, rel in iter_hexagons(ring, sign):
        yield rel.origin, evaluate_relation(rel, entry, one)


def orthogonality_residual(ring: FusionRingData, entry: Callable[[Sextuple], object], one) -> Iterator[Tuple[tuple, object]]:
    for _, rel in iter_orthogonality(ring):
        yield rel.origin, evaluate_relation(rel, entry, one)
