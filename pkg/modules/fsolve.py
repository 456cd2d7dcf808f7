"""
F-Symbol Solver
Orthogonal F-matrix solver: hexagon Groebner step, pentagon elimination, root closure
"""

import copy
import logging
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import mpmath

import config
from core.errors import DataError, DomainError, InconsistentSystemError, UnsolvedError
from modules.catalog import FusionRingData, Label, Sextuple, index_sextuples
from modules.cyclo import SqrtTower, TowerNumber
from modules.eqgen import (
    gen_hexagon,
    gen_orthogonality,
    gen_pentagon,
    hexagon_residual,
    orthogonality_residual,
    pentagon_residual,
)
from modules.feature_flags import feature_flags, is_sign_enumeration_enabled, use_both_hexagon_signs
from modules.groebner import buchberger
from modules import linalg
from modules.sparsepoly import SparsePoly, _inverse, partition_polynomials, update_reduce
from services.worker_pool import WorkerPool

logger = logging.getLogger(__name__)

__all__ = [
    "FMatrix",
    "FSymbolTable",
    "SolveSummary",
    "VerificationReport",
    "apply_gauge",
    "buchberger",
    "fvars_are_real",
    "solve",
    "solve_easy",
    "solve_step1",
    "solve_step2",
    "solve_step3",
    "verify",
]

LabelLike = Union[Label, int, str]


@dataclass
class FMatrix:
    """One F-block with its row (e) and column (f) labels"""

    rows: List[Label]
    cols: List[Label]
    entries: List[List[object]]

    def inverse(self) -> List[List[object]]:
        return linalg.inverse(self.entries)


class FSymbolTable:
    """
    Solver state for the F-symbol unknowns

    values maps a variable index to a polynomial in strictly smaller variables
    (higher indices); a solved variable has a constant value. known_squares holds
    relations x_j^2 = alpha_j discovered along the way.
    """

    def __init__(self, ring: FusionRingData, tower: Optional[SqrtTower] = None):
        self.ring = ring
        self.sextuples, self.index = index_sextuples(ring)
        self.nvars = len(self.sextuples)
        self.tower = tower or SqrtTower(ring.cyclo_order)
        self.values: Dict[int, SparsePoly] = {}
        self.known_squares: Dict[int, object] = {}
        self.nonzero: Set[int] = set()
        self.var_degs: Dict[int, int] = {}

    # -- inspection -----------------------------------------------------

    @property
    def solved(self) -> Set[int]:
        return set(self.values)

    def is_solved(self, var: int) -> bool:
        return var in self.values

    def is_complete(self) -> bool:
        return len(self.values) == self.nvars and all(v.is_constant() for v in self.values.values())

    def unsolved(self) -> List[int]:
        return [i for i in range(self.nvars) if i not in self.values]

    def number(self, var: int) -> TowerNumber:
        """Value of a solved variable as a tower number."""
        value = self.values.get(var)
        if value is None or not value.is_constant():
            raise DomainError(f"F-symbol {self.name_of(var)} is not determined")
        return self.tower.coerce(value.constant_value(0))

    def name_of(self, var: int) -> str:
        names = self.ring.names
        return "F[" + ",".join(names[x] for x in self.sextuples[var]) + "]"

    def entry(self, sextuple: Sequence[LabelLike]) -> TowerNumber:
        """[F^{abc}_d]_{ef} for any sextuple: 1 on vacuum blocks, 0 when inadmissible."""
        s = tuple(self.ring.index_of(x) for x in sextuple)
        if len(s) != 6:
            raise DomainError(f"expected six labels, got {len(s)}")
        if not self.ring.admissible(*s):
            return self.tower.zero()
        if self.ring.has_vacuum(s[0], s[1], s[2]):
            return self.tower.one()
        return self.number(self.index[s])

    __call__ = entry

    def fmatrix(self, a: LabelLike, b: LabelLike, c: LabelLike, d: LabelLike) -> FMatrix:
        """The admissible block F^{abc}_d with rows e in a x b and columns f in b x c."""
        ring = self.ring
        a, b, c, d = (ring.index_of(x) for x in (a, b, c, d))
        rows = [e for e in ring.fuse_indices(a, b) if (e, c, d) in ring.triples]
        cols = [f for f in ring.fuse_indices(b, c) if (a, f, d) in ring.triples]
        if not rows or not cols:
            raise DomainError(f"F^{{{ring.names[a]},{ring.names[b]},{ring.names[c]}}}_{ring.names[d]} is empty")
        entries = [[self.entry((a, b, c, d, e, f)) for f in cols] for e in rows]
        return FMatrix([ring.labels[e] for e in rows], [ring.labels[f] for f in cols], entries)

    # -- mutation -------------------------------------------------------

    def _constant(self, value) -> SparsePoly:
        return SparsePoly.constant(value, self.nvars)

    def record_square(self, var: int, alpha) -> List[SparsePoly]:
        """Record x_var^2 = alpha; returns relations that must join the basis."""
        if not alpha:
            return self.assign(var, self._constant(0))
        previous = self.known_squares.get(var)
        if previous is not None:
            if previous == alpha:
                return []
            raise InconsistentSystemError(
                f"{self.name_of(var)} squares to both {previous} and {alpha}", [self.sextuples[var]]
            )
        self.known_squares[var] = alpha
        self.nonzero.add(var)
        value = self.values.get(var)
        if value is None:
            return []
        return self._square_relation(var, value, alpha)

    def _square_relation(self, var: int, value: SparsePoly, alpha) -> List[SparsePoly]:
        rel = (value * value - alpha).reduce_squares(self.known_squares)
        if rel.is_constant() and rel:
            raise InconsistentSystemError(
                f"{self.name_of(var)} = {value} does not square to {alpha}", [self.sextuples[var]]
            )
        return [rel] if rel else []

    def assign(self, var: int, value: SparsePoly) -> List[SparsePoly]:
        """
        Assign a variable and back-substitute it into every stored value

        Args:
            var: Variable index
            value: Polynomial in variables with larger indices

        Returns:
            Relations that must join the basis (conflicts, square consistency)
        """
        value = value.substitute(self.values).reduce_squares(self.known_squares)
        existing = self.values.get(var)
        if existing is not None:
            if existing == value:
                return []
            diff = existing - value
            if diff.is_constant():
                raise InconsistentSystemError(
                    f"{self.name_of(var)} assigned both {existing} and {value}", [self.sextuples[var]]
                )
            return [diff]
        lowest = value.min_variable()
        if lowest is not None and lowest <= var:
            raise DomainError(f"assignment for {self.name_of(var)} is not triangular")

        single = {var: value}
        for i, current in self.values.items():
            if var in current.variables():
                self.values[i] = current.substitute(single).reduce_squares(self.known_squares)
        self.values[var] = value
        if value.is_constant() and value:
            self.nonzero.add(var)

        alpha = self.known_squares.get(var)
        if alpha is None:
            return []
        return self._square_relation(var, value, alpha)

    def apply(self, assignments: Iterable[Tuple[int, SparsePoly]], squares: Iterable[Tuple[int, object]]) -> Tuple[int, List[SparsePoly]]:
        """Apply solve_easy findings; returns (new facts, extra relations)."""
        new = 0
        extra: List[SparsePoly] = []
        for var, alpha in squares:
            if var not in self.known_squares and var not in self.values:
                new += 1
            extra.extend(self.record_square(var, alpha))
        for var, value in assignments:
            if var not in self.values:
                new += 1
            extra.extend(self.assign(var, value))
        return new, extra

    def power_cache(self, degrees: Mapping[int, int]) -> Dict[Tuple[int, int], SparsePoly]:
        """Powers of assigned values up to the degrees present in the basis."""
        cache = {}
        for var, top in degrees.items():
            value = self.values.get(var)
            if value is None:
                continue
            power = value
            cache[(var, 1)] = power
            for p in range(2, top + 1):
                power = power * value
                cache[(var, p)] = power
        return cache

    def copy(self) -> "FSymbolTable":
        return copy.deepcopy(self, {id(self.ring): self.ring})

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        if not self.is_complete():
            raise DataError(f"F-symbol table for {self.ring.name!r} is incomplete ({len(self.unsolved())} unsolved)")
        return {
            "ring": self.ring.name,
            "cyclo_order": self.ring.cyclo_order,
            "radicals": self.tower.to_json(),
            "fsymbols": [
                {"sextuple": list(s), "value": self.number(i).terms_to_json()}
                for i, s in enumerate(self.sextuples)
            ],
        }

    @classmethod
    def from_json(cls, ring: FusionRingData, data: Mapping) -> "FSymbolTable":
        try:
            if int(data["cyclo_order"]) != ring.cyclo_order:
                raise DataError(f"F-symbols over Q(zeta_{data['cyclo_order']}) do not match ring {ring.name!r}")
            tower = SqrtTower.from_json(ring.cyclo_order, data.get("radicals", []))
            table = cls(ring, tower)
            for item in data["fsymbols"]:
                s = tuple(int(x) for x in item["sextuple"])
                if s not in table.index:
                    raise DataError(f"{s} is not an F-symbol unknown of ring {ring.name!r}")
                number = TowerNumber.from_terms_json(tower, item["value"])
                table.values[table.index[s]] = table._constant(number)
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"malformed F-symbol data: {e}")
        if not table.is_complete():
            raise DataError(f"F-symbol data for {ring.name!r} is missing {len(table.unsolved())} entries")
        table.nonzero = {i for i, v in table.values.items() if v}
        return table

    def embedded(self, precision_bits: int = 53) -> Dict[Sextuple, complex]:
        return {s: complex(self.number(i).embed(precision_bits)) for i, s in enumerate(self.sextuples)}

    def __repr__(self) -> str:
        return f"FSymbolTable({self.ring.name!r}, solved={len(self.values)}/{self.nvars}, radicals={len(self.tower)})"


@dataclass
class SolveSummary:
    """Statistics collected while solving one ring"""

    ring: str
    variables: int
    step1_solved: int = 0
    deferred_components: int = 0
    components: int = 0
    pentagon_generated: int = 0
    pentagon_kept: int = 0
    rounds: List[Tuple[int, int]] = field(default_factory=list)
    step2_residual: int = 0
    radicals: int = 0
    sign_pattern: str = ""
    verified: Optional[bool] = None
    elapsed: float = 0.0
    flags: Dict[str, bool] = field(default_factory=feature_flags.get_all_flags)

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "variables": self.variables,
            "step1_solved": self.step1_solved,
            "components": self.components,
            "deferred_components": self.deferred_components,
            "pentagon_generated": self.pentagon_generated,
            "pentagon_kept": self.pentagon_kept,
            "rounds": [list(r) for r in self.rounds],
            "step2_residual": self.step2_residual,
            "radicals": self.radicals,
            "sign_pattern": self.sign_pattern,
            "verified": self.verified,
            "elapsed": round(self.elapsed, 3),
            "flags": dict(self.flags),
        }


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------

def solve_easy(basis: Iterable[SparsePoly]) -> Tuple[List[Tuple[int, SparsePoly]], List[Tuple[int, object]]]:
    """
    Extract easy assignments and known squares

    A polynomial with at most two terms whose largest variable x_j (lowest index)
    appears only as the linear monomial x_j gives x_j := -q/c. c x_j^2 + d with d
    constant gives the known square x_j^2 = -d/c. The first finding per variable wins.

    Args:
        basis: Polynomials (not modified)

    Returns:
        (assignments, known squares) in basis order
    """
    assignments: List[Tuple[int, SparsePoly]] = []
    squares: List[Tuple[int, object]] = []
    assigned: Set[int] = set()
    squared: Set[int] = set()
    for p in basis:
        if not p or len(p) > 2:
            continue
        j = p.min_variable()
        if j is None:
            continue
        lead = [(e, c) for e, c in p.terms if any(v == j for v, _ in e)]
        rest = [(e, c) for e, c in p.terms if not any(v == j for v, _ in e)]
        if len(lead) != 1:
            continue
        exps, c = lead[0]
        if exps == ((j, 1),):
            if j in assigned:
                continue
            assigned.add(j)
            q = SparsePoly(p.nvars, dict(rest))
            assignments.append((j, -q.scale(_inverse(c))))
        elif exps == ((j, 2),) and (not rest or rest[0][0] == ()):
            if j in squared:
                continue
            squared.add(j)
            d = rest[0][1] if rest else 0
            squares.append((j, -(d * _inverse(c))))
    return assignments, squares


def _reduce_round(table: FSymbolTable, basis: Sequence[SparsePoly], pool: WorkerPool) -> List[SparsePoly]:
    degrees: Dict[int, int] = {}
    for p in basis:
        for v, d in p.var_degrees().items():
            if d > degrees.get(v, 0):
                degrees[v] = d
    table.var_degs = degrees
    reducer = partial(
        update_reduce,
        known_squares=dict(table.known_squares),
        assignments=dict(table.values),
        nonzero=frozenset(table.nonzero),
        power_cache=table.power_cache(degrees),
    )
    out: List[SparsePoly] = []
    seen: Set[SparsePoly] = set()
    for p in pool.chunked_map(reducer, basis):
        if not p:
            continue
        if p.is_constant():
            raise InconsistentSystemError(f"a relation reduced to the nonzero constant {p.constant_value()}")
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _eliminate(table: FSymbolTable, basis: Sequence[SparsePoly], pool: WorkerPool, summary: Optional[SolveSummary]) -> List[SparsePoly]:
    """Easy-solve, back-substitute and reduce until a round finds nothing new."""
    basis = _reduce_round(table, basis, pool)
    while True:
        assignments, squares = solve_easy(basis)
        new, extra = table.apply(assignments, squares)
        if new or extra:
            basis = _reduce_round(table, list(basis) + extra, pool)
        if not new:
            return basis
        if summary is not None:
            summary.rounds.append((len(table.values), len(basis)))
        logger.info(f"Elimination round: {len(table.values)}/{table.nvars} solved, {len(basis)} relations left")


# ---------------------------------------------------------------------------
# Steps
# ---------------------------------------------------------------------------

def solve_step1(
    ring: FusionRingData,
    table: Optional[FSymbolTable] = None,
    max_component_size: Optional[int] = None,
    workers: Optional[int] = None,
    summary: Optional[SolveSummary] = None,
) -> Tuple[FSymbolTable, List[SparsePoly]]:
    """
    Solve what the hexagon and orthogonality constraints determine

    Args:
        ring: Ring with R-symbols
        table: Table to update (a fresh one when None)
        max_component_size: Groebner variable limit per component
        workers: Worker count for generation and per-component jobs
        summary: Optional statistics sink

    Returns:
        (table, residual relations including deferred components)
    """
    table = table or FSymbolTable(ring)
    limit = max_component_size or config.MAX_COMPONENT_SIZE
    pool = WorkerPool(workers)
    gen_workers = pool.workers if feature_flags.is_enabled("enable_parallel_generation") else 1

    sign = None if use_both_hexagon_signs() else 1
    system = gen_hexagon(ring, sign, gen_workers).merge(gen_orthogonality(ring))
    parts = partition_polynomials(system.polynomials)
    logger.info(f"Step 1: {len(system)} hexagon/orthogonality relations in {len(parts)} components")

    job = partial(buchberger, var_limit=limit, pair_limit=config.GROEBNER_PAIR_LIMIT)
    bases = pool.chunked_map(job, [polys for _, polys in parts])

    residual: List[SparsePoly] = []
    deferred = 0
    for (variables, polys), gb in zip(parts, bases):
        if gb is None:
            deferred += 1
            logger.info(f"Deferring component with {len(variables)} variables to the pentagon step")
            residual.extend(polys)
            continue
        if any(g.is_constant() for g in gb):
            raise InconsistentSystemError(
                f"hexagon/orthogonality component on {len(variables)} variables is inconsistent",
                [system.origin_of(p) for p in polys],
            )
        assignments, squares = solve_easy(gb)
        _, extra = table.apply(assignments, squares)
        residual.extend(gb)
        residual.extend(extra)

    if summary is not None:
        summary.components = len(parts)
        summary.deferred_components = deferred
        summary.step1_solved = len(table.values)
    logger.info(f"Step 1 solved {len(table.values)}/{table.nvars} F-symbols ({deferred} components deferred)")
    return table, residual


def solve_step2(
    ring: FusionRingData,
    table: FSymbolTable,
    residual: Sequence[SparsePoly],
    workers: Optional[int] = None,
    summary: Optional[SolveSummary] = None,
) -> List[SparsePoly]:
    """
    Pentagon elimination to a fixpoint

    Pentagons are generated with the current values substituted at creation, then
    merged with the residual and reduced round by round.

    Returns:
        The reduced ideal basis left over
    """
    pool = WorkerPool(workers)
    gen_workers = pool.workers if feature_flags.is_enabled("enable_parallel_generation") else 1
    system = gen_pentagon(ring, values=dict(table.values), workers=gen_workers)
    basis = _eliminate(table, list(residual) + list(system.polynomials), pool, summary)
    if summary is not None:
        summary.pentagon_generated = system.generated
        summary.pentagon_kept = len(system)
        summary.step2_residual = len(basis)
    logger.info(f"Step 2 left {len(basis)} relations and {len(table.unsolved())} unsolved F-symbols")
    if feature_flags.is_enabled("enable_term_diagnostics"):
        for p in basis:
            if len(p) > config.SOFT_MAX_TERMS:
                logger.debug(f"Residual relation with {len(p)} terms: {p.to_text(table.name_of)}")
    return basis


def _is_positive(x: TowerNumber) -> bool:
    z = x.embed(64)
    eps = mpmath.mpf(2) ** -48
    return z.real > eps or (abs(z.real) <= eps and z.imag > 0)


def solve_step3(
    table: FSymbolTable,
    residual: Sequence[SparsePoly],
    workers: Optional[int] = None,
    summary: Optional[SolveSummary] = None,
    signs: int = 0,
) -> FSymbolTable:
    """
    Close the remaining known squares with exact roots

    Known squares are resolved from the highest variable index down: an existing
    root in the tower is used when there is one, otherwise a new radical is
    adjoined. The positive branch is taken unless bit i of signs flips decision i.

    Raises:
        UnsolvedError: relations remain that neither roots nor Groebner bases resolve
    """
    pool = WorkerPool(workers)
    basis = list(residual)
    decision = 0
    pattern = []
    while True:
        pending = sorted((v for v in table.known_squares if v not in table.values), reverse=True)
        if pending:
            var = pending[0]
            alpha = table.known_squares[var]
            root = table.tower.sqrt(alpha)
            if root is None:
                root = table.tower.adjoin(alpha)
            elif not _is_positive(root):
                root = -root
            flip = bool(signs >> decision & 1)
            if flip:
                root = -root
            pattern.append("-" if flip else "+")
            decision += 1
            logger.debug(f"Root closure: {table.name_of(var)} := {root}")
            extra = table.assign(var, table._constant(root))
            basis = _eliminate(table, basis + extra, pool, summary)
            continue

        if table.is_complete():
            if basis:
                raise InconsistentSystemError(f"{len(basis)} relations survive a complete assignment")
            break

        parts = partition_polynomials(basis)
        if not parts:
            missing = table.unsolved()
            raise UnsolvedError(f"{len(missing)} F-symbols appear in no remaining relation", missing)
        variables, polys = min(parts, key=lambda part: (len(part[0]), part[0]))
        gb = buchberger(polys, pair_limit=config.GROEBNER_PAIR_LIMIT)
        if gb is None:
            raise UnsolvedError(f"Groebner basis of a {len(variables)}-variable residual component did not finish", variables)
        if any(g.is_constant() for g in gb):
            raise InconsistentSystemError(f"residual component on {len(variables)} variables is inconsistent")
        assignments, squares = solve_easy(gb)
        new, extra = table.apply(assignments, squares)
        if not new:
            raise UnsolvedError(f"residual component on {len(variables)} variables has no easy relation", variables)
        rest = [p for p in basis if not (p.variables() & set(variables))]
        basis = _eliminate(table, rest + gb + extra, pool, summary)

    if summary is not None:
        summary.radicals = len(table.tower)
        summary.sign_pattern = "".join(pattern)
    return table


def solve(
    ring: FusionRingData,
    workers: Optional[int] = None,
    max_component_size: Optional[int] = None,
    enumerate_signs: Optional[bool] = None,
    check: bool = False,
) -> Tuple[FSymbolTable, SolveSummary]:
    """
    Run all three steps for one ring

    Args:
        ring: Catalog ring
        workers: Worker count (config.WORKERS when None)
        max_component_size: Step-1 Groebner variable limit
        enumerate_signs: Try other Step-3 sign patterns until verify passes
        check: Run verify on the final table and record the outcome

    Returns:
        (complete table, summary)
    """
    started = time.time()
    table = FSymbolTable(ring)
    summary = SolveSummary(ring=ring.name, variables=table.nvars)
    if enumerate_signs is None:
        enumerate_signs = is_sign_enumeration_enabled()

    table, residual = solve_step1(ring, table, max_component_size, workers, summary)
    basis = solve_step2(ring, table, residual, workers, summary)

    if not enumerate_signs:
        solve_step3(table, basis, workers, summary)
        if check:
            summary.verified = verify(table).passed
    else:
        limit = config.SIGN_ENUMERATION_LIMIT
        pending = sum(1 for v in table.known_squares if v not in table.values)
        patterns = 1 << min(pending, limit)
        start_state = copy.deepcopy((table, basis), {id(ring): ring})
        for signs in range(patterns):
            trial, trial_basis = copy.deepcopy(start_state, {id(ring): ring})
            try:
                solve_step3(trial, trial_basis, workers, summary, signs)
            except (InconsistentSystemError, UnsolvedError) as e:
                logger.info(f"Sign pattern {signs:b} failed: {e}")
                continue
            if verify(trial).passed:
                table = trial
                summary.verified = True
                break
        else:
            raise UnsolvedError(f"no sign pattern among {patterns} passes verification", table.unsolved())

    summary.elapsed = time.time() - started
    logger.info(f"Solved {ring.name}: {summary.variables} F-symbols, {summary.radicals} radicals in {summary.elapsed:.1f}s")
    return table, summary


# ---------------------------------------------------------------------------
# Verification and gauge
# ---------------------------------------------------------------------------

CHECKS = ("pentagon", "hexagon+", "hexagon-", "orthogonality", "rigidity", "pivotal")


@dataclass
class VerificationReport:
    """Residual failures per axiom check, each with its generating tuple"""

    ring: str
    checked: Dict[str, int] = field(default_factory=dict)
    failures: Dict[str, List[tuple]] = field(default_factory=dict)
    real: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def record(self, check: str, witness: tuple, ok: bool) -> None:
        self.checked[check] = self.checked.get(check, 0) + 1
        self.failures.setdefault(check, [])
        if not ok:
            self.failures[check].append(witness)

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "passed": self.passed,
            "real": self.real,
            "checks": {
                check: {"checked": self.checked.get(check, 0), "failures": [list(w) for w in self.failures.get(check, [])]}
                for check in CHECKS
            },
        }


def fvars_are_real(table: FSymbolTable) -> bool:
    return all(table.number(i).is_real() for i in range(table.nvars))


def verify(table: FSymbolTable, numeric: bool = False, precision_bits: Optional[int] = None) -> VerificationReport:
    """
    Check every axiom on a complete table

    Args:
        table: Complete F-symbol table
        numeric: Compare embedded residuals against 2^-precision_bits instead of exactly
        precision_bits: Embedding precision (config.PRECISION_BITS when None)

    Returns:
        Report with failing tuples per check
    """
    if not table.is_complete():
        raise DomainError(f"cannot verify an incomplete table ({len(table.unsolved())} unsolved)")
    ring = table.ring
    bits = precision_bits or config.PRECISION_BITS
    one = table.tower.one()
    report = VerificationReport(ring.name)

    if numeric:
        threshold = mpmath.mpf(2) ** -bits

        def vanishes(x) -> bool:
            return abs(table.tower.coerce(x).embed(bits)) < threshold
    else:
        def vanishes(x) -> bool:
            return not x

    for origin, value in pentagon_residual(ring, table.entry, one):
        report.record("pentagon", origin, vanishes(value))
    for sign, check in ((1, "hexagon+"), (-1, "hexagon-")):
        for origin, value in hexagon_residual(ring, table.entry, one, sign):
            report.record(check, origin, vanishes(value))
    for origin, value in orthogonality_residual(ring, table.entry, one):
        report.record("orthogonality", origin, vanishes(value))

    vac = ring.vacuum
    for a in range(ring.rank):
        ad = ring.dual[a]
        left = table.entry((a, ad, a, a, vac, vac))
        block = table.fmatrix(ad, a, ad, ad)
        i = [label.index for label in block.rows].index(vac)
        j = [label.index for label in block.cols].index(vac)
        right = block.inverse()[i][j]
        report.record("rigidity", (a,), vanishes(left - right))

    for a, b, c in sorted(ring.triples):
        cd, ad, bd = ring.dual[c], ring.dual[a], ring.dual[b]
        product = (
            table.entry((a, b, cd, vac, c, ad))
            * table.entry((b, cd, a, vac, ad, bd))
            * table.entry((cd, a, b, vac, bd, c))
        )
        expected = ring.pivotal[a] * ring.pivotal[b] * ring.pivotal[c]
        report.record("pivotal", (a, b, c), vanishes(product - expected))

    try:
        report.real = fvars_are_real(table)
    except DomainError:
        report.real = None
    logger.info(f"Verified {ring.name}: {'passed' if report.passed else 'FAILED'} "
                f"({sum(report.checked.values())} checks)")
    return report


def apply_gauge(table: FSymbolTable, gauge: Mapping[Tuple[LabelLike, LabelLike, LabelLike], object]) -> FSymbolTable:
    """
    Gauge-transform a complete table

    F~^{abc}_{d;xy} = F^{abc}_{d;xy} f^{bc}_y f^{ay}_d / (f^{ab}_x f^{xc}_d), with f = 1
    on every admissible triple the gauge does not mention.

    Raises:
        DomainError: f is given on an inadmissible triple, is zero, or is not 1 on a vacuum triple
    """
    ring = table.ring
    tower = table.tower
    one = tower.one()
    f: Dict[Tuple[int, int, int], TowerNumber] = {}
    for key, raw in gauge.items():
        a, b, c = (ring.index_of(x) for x in key)
        if (a, b, c) not in ring.triples:
            raise DomainError(f"gauge given on inadmissible triple {key}")
        value = tower.coerce(raw)
        if not value:
            raise DomainError(f"gauge vanishes on admissible triple {key}")
        if ring.has_vacuum(a, b) and value != 1:
            raise DomainError(f"gauge must be 1 on vacuum triple {key}")
        f[(a, b, c)] = value

    def g(a: int, b: int, c: int) -> TowerNumber:
        return f.get((a, b, c), one)

    gauged = FSymbolTable(ring, tower)
    for i, (a, b, c, d, x, y) in enumerate(table.sextuples):
        factor = g(b, c, y) * g(a, y, d) / (g(a, b, x) * g(x, c, d))
        gauged.values[i] = gauged._constant(table.number(i) * factor)
    gauged.nonzero = {i for i, v in gauged.values.items() if v}
    return gauged
