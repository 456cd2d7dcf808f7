"""
Sparse Polynomials
Multivariate polynomials over cyclotomic and tower numbers in degrevlex order
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Collection, Dict, Iterable, List, Mapping, Optional, Set, Tuple

import config
from core.errors import DomainError
from modules.cyclo import CycloNumber, TowerNumber

logger = logging.getLogger(__name__)

# Sparse exponent vector: ((variable, power), ...) sorted by variable index, powers > 0
ExpVec = Tuple[Tuple[int, int], ...]

ONE_MONOMIAL: ExpVec = ()


@lru_cache(maxsize=1 << 16)
def degrevlex_key(exps: ExpVec) -> tuple:
    """
    Sort key for degrevlex with x_0 > x_1 > ... > x_{n-1}

    A larger key means a larger monomial: total degree first, then the monomial
    with the smaller exponent in the last differing variable wins.
    """
    degree = sum(p for _, p in exps)
    return (degree, tuple((-v, -p) for v, p in reversed(exps)) + ((1, 0),))


def mono_mul(a: ExpVec, b: ExpVec) -> ExpVec:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, pa = a[i]
        vb, pb = b[j]
        if va == vb:
            out.append((va, pa + pb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_divides(a: ExpVec, b: ExpVec) -> bool:
    """True when monomial a divides monomial b."""
    powers = dict(b)
    return all(powers.get(v, 0) >= p for v, p in a)


def mono_div(b: ExpVec, a: ExpVec) -> ExpVec:
    """b / a, assuming a divides b."""
    powers = dict(b)
    for v, p in a:
        powers[v] -= p
    return tuple((v, p) for v, p in sorted(powers.items()) if p)


def mono_lcm(a: ExpVec, b: ExpVec) -> ExpVec:
    powers = dict(a)
    for v, p in b:
        powers[v] = max(powers.get(v, 0), p)
    return tuple(sorted(powers.items()))


def mono_gcd(a: ExpVec, b: ExpVec) -> ExpVec:
    pb = dict(b)
    return tuple((v, min(p, pb[v])) for v, p in a if v in pb)


def mono_degree(a: ExpVec) -> int:
    return sum(p for _, p in a)


def _inverse(c):
    if isinstance(c, (int, Fraction)):
        return 1 / Fraction(c)
    return c.inverse()


class SparsePoly:
    """Immutable sparse polynomial with exact coefficients"""

    __slots__ = ("nvars", "_terms", "_ordered", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[ExpVec, object]] = None):
        self.nvars = nvars
        self._terms: Dict[ExpVec, object] = {e: c for e, c in terms.items() if c} if terms else {}
        self._ordered: Optional[List[Tuple[ExpVec, object]]] = None
        self._hash: Optional[int] = None
        if len(self._terms) > config.SOFT_MAX_TERMS:
            logger.debug(f"Polynomial with {len(self._terms)} terms exceeds the soft limit of {config.SOFT_MAX_TERMS}")

    @classmethod
    def constant(cls, value, nvars: int) -> "SparsePoly":
        return cls(nvars, {ONE_MONOMIAL: value})

    @classmethod
    def variable(cls, index: int, nvars: int, one=1) -> "SparsePoly":
        if not 0 <= index < nvars:
            raise DomainError(f"variable x{index} outside 0..{nvars - 1}")
        return cls(nvars, {((index, 1),): one})

    @classmethod
    def monomial(cls, exps: ExpVec, coefficient, nvars: int) -> "SparsePoly":
        return cls(nvars, {exps: coefficient})

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> List[Tuple[ExpVec, object]]:
        """Terms in strictly decreasing degrevlex order."""
        if self._ordered is None:
            self._ordered = sorted(self._terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)
        return self._ordered

    def term_map(self) -> Dict[ExpVec, object]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not e for e in self._terms)

    def constant_value(self, zero=0):
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return self._terms.get(ONE_MONOMIAL, zero)

    @property
    def leading_monomial(self) -> ExpVec:
        return self.terms[0][0]

    @property
    def leading_coefficient(self):
        return self.terms[0][1]

    def variables(self) -> Set[int]:
        return {v for e in self._terms for v, _ in e}

    def min_variable(self) -> Optional[int]:
        """Index of the largest variable present (lowest index), or None."""
        return min((e[0][0] for e in self._terms if e), default=None)

    def degree(self) -> int:
        return max((mono_degree(e) for e in self._terms), default=0)

    def var_degrees(self) -> Dict[int, int]:
        degs: Dict[int, int] = {}
        for e in self._terms:
            for v, p in e:
                if p > degs.get(v, 0):
                    degs[v] = p
        return degs

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "SparsePoly") -> None:
        if other.nvars != self.nvars:
            raise DomainError(f"polynomials over {self.nvars} and {other.nvars} variables")

    def _lift(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        return SparsePoly.constant(other, self.nvars)

    def __add__(self, other) -> "SparsePoly":
        other = self._lift(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            v = acc[e] + c if e in acc else c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return SparsePoly(self.nvars, acc)

    def __radd__(self, other) -> "SparsePoly":
        return self.__add__(other)

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._lift(other) + (-self)

    def scale(self, c) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: v * c for e, v in self._terms.items()})

    def mul_monomial(self, exps: ExpVec, c=1) -> "SparsePoly":
        return SparsePoly(self.nvars, {mono_mul(e, exps): v * c for e, v in self._terms.items()})

    def __mul__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        self._check(other)
        acc: Dict[ExpVec, object] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = mono_mul(e1, e2)
                v = c1 * c2
                acc[e] = acc[e] + v if e in acc else v
        return SparsePoly(self.nvars, acc)

    def __rmul__(self, other) -> "SparsePoly":
        return self.scale(other)

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise DomainError("negative powers of polynomials are not polynomials")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        if result is None:
            return SparsePoly.constant(1, self.nvars)
        return result

    def monic(self) -> "SparsePoly":
        if not self._terms:
            return self
        lc = self.leading_coefficient
        if lc == 1:
            return self
        return self.scale(_inverse(lc))

    # -- reductions -----------------------------------------------------

    def substitute(self, assignments: Mapping[int, object], power_cache: Optional[dict] = None) -> "SparsePoly":
        """
        Replace assigned variables by their values

        Args:
            assignments: Map variable -> SparsePoly (or constant) in strictly smaller variables
            power_cache: Optional shared cache of (variable, power) -> value**power

        Returns:
            Polynomial with no assigned variable left
        """
        if not assignments:
            return self
        cache = power_cache if power_cache is not None else {}
        acc: Dict[ExpVec, object] = {}
        touched = False
        for exps, c in self._terms.items():
            kept = []
            factor: Optional[SparsePoly] = None
            for v, p in exps:
                value = assignments.get(v)
                if value is None:
                    kept.append((v, p))
                    continue
                touched = True
                power = cache.get((v, p))
                if power is None:
                    value = self._lift(value)
                    lowest = value.min_variable()
                    if lowest is not None and lowest <= v:
                        raise DomainError(f"non-triangular assignment for x{v} involves x{lowest}")
                    power = value ** p
                    cache[(v, p)] = power
                factor = power if factor is None else factor * power
            if factor is None:
                acc[exps] = acc[exps] + c if exps in acc else c
                continue
            rest = tuple(kept)
            for e, v in factor._terms.items():
                key = mono_mul(e, rest)
                w = v * c
                acc[key] = acc[key] + w if key in acc else w
        if not touched:
            return self
        return SparsePoly(self.nvars, acc)

    def reduce_squares(self, known_squares: Mapping[int, object]) -> "SparsePoly":
        """Rewrite x_j^(2k+r) as alpha_j^k x_j^r for every known square x_j^2 = alpha_j."""
        if not known_squares:
            return self
        acc: Dict[ExpVec, object] = {}
        touched = False
        for exps, c in self._terms.items():
            new = []
            coef = c
            for v, p in exps:
                alpha = known_squares.get(v)
                if alpha is not None and p >= 2:
                    touched = True
                    k, r = divmod(p, 2)
                    coef = coef * alpha ** k
                    if r:
                        new.append((v, 1))
                else:
                    new.append((v, p))
            key = tuple(new)
            acc[key] = acc[key] + coef if key in acc else coef
        if not touched:
            return self
        return SparsePoly(self.nvars, acc)

    def divide_gcd(self, nonzero: Collection[int]) -> "SparsePoly":
        """Divide out the monomial gcd of all terms, restricted to known-nonzero variables."""
        if not self._terms or not nonzero:
            return self
        common: Optional[Dict[int, int]] = None
        for exps in self._terms:
            powers = {v: p for v, p in exps if v in nonzero}
            if common is None:
                common = powers
            else:
                common = {v: min(p, powers[v]) for v, p in common.items() if v in powers}
            if not common:
                return self
        divisor = tuple(sorted(common.items()))
        return SparsePoly(self.nvars, {mono_div(e, divisor): c for e, c in self._terms.items()})

    def evaluate(self, values: Mapping[int, object], one=1):
        """Evaluate with every variable assigned a field element."""
        total = None
        for exps, c in self._terms.items():
            term = c * one
            for v, p in exps:
                if v not in values:
                    raise DomainError(f"no value for x{v}")
                term = term * values[v] ** p
            total = term if total is None else total + term
        return one * 0 if total is None else total

    # -- identity -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction, CycloNumber, TowerNumber)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def to_text(self, namer: Optional[Callable[[int], str]] = None) -> str:
        """Debug form: coefficient*monomial sum in degrevlex order."""
        if not self._terms:
            return "0"
        namer = namer or (lambda i: f"x{i}")
        parts = []
        for exps, c in self.terms:
            mono = "*".join(namer(v) if p == 1 else f"{namer(v)}^{p}" for v, p in exps)
            if not mono:
                parts.append(f"({c})")
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SparsePoly({self.to_text()})"


def update_reduce(
    p: SparsePoly,
    known_squares: Mapping[int, object],
    assignments: Mapping[int, object],
    nonzero: Collection[int] = (),
    power_cache: Optional[dict] = None,
) -> SparsePoly:
    """
    Canonical reduction of one basis polynomial against the solver state

    Args:
        p: Polynomial to reduce
        known_squares: Map variable -> alpha for relations x^2 = alpha
        assignments: Map variable -> value in smaller variables
        nonzero: Variables known to be nonzero (eligible for gcd division)
        power_cache: Optional cache of powers of assigned values

    Returns:
        substitute -> square-reduce -> gcd-divide -> monic
    """
    reduced = p.substitute(assignments, power_cache)
    reduced = reduced.reduce_squares(known_squares)
    reduced = reduced.divide_gcd(nonzero)
    return reduced.monic()


@dataclass
class EquationsGraph:
    """Variables as vertices, edges between variables sharing a term"""

    adjacency: Dict[int, Set[int]] = field(default_factory=dict)
    components: List[List[int]] = field(default_factory=list)

    def edges(self) -> Set[Tuple[int, int]]:
        return {(u, v) for u, nbrs in self.adjacency.items() for v in nbrs if u < v}

    def component_of(self, var: int) -> Optional[List[int]]:
        for comp in self.components:
            if var in comp:
                return comp
        return None


def _connected_components(adjacency: Mapping[int, Set[int]]) -> List[List[int]]:
    seen: Set[int] = set()
    components = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        components.append(sorted(comp))
    components.sort(key=lambda c: (-len(c), c[0]))
    return components


def equations_graph(polys: Iterable[SparsePoly]) -> EquationsGraph:
    """
    Build the equations graph of a polynomial set

    Args:
        polys: Polynomials over the F-symbol variables

    Returns:
        Graph with an edge x_i -- x_j whenever some term is divisible by x_i x_j,
        plus its connected components (largest first)
    """
    adjacency: Dict[int, Set[int]] = {}
    for p in polys:
        for exps in p.term_map():
            vars_in_term = [v for v, _ in exps]
            for v in vars_in_term:
                adjacency.setdefault(v, set())
            for i, u in enumerate(vars_in_term):
                for w in vars_in_term[i + 1:]:
                    adjacency[u].add(w)
                    adjacency[w].add(u)
    return EquationsGraph(adjacency, _connected_components(adjacency))


def partition_polynomials(polys: Iterable[SparsePoly]) -> List[Tuple[List[int], List[SparsePoly]]]:
    """
    Split a system into subsystems with pairwise disjoint variables

    Two polynomials share a subsystem whenever they share a variable, so each part
    is a union of equations-graph components. Constant polynomials are skipped.
    """
    parent: Dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    polys = list(polys)
    for p in polys:
        vs = sorted(p.variables())
        for v in vs:
            parent.setdefault(v, v)
        for v in vs[1:]:
            ra, rb = find(vs[0]), find(v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups: Dict[int, Tuple[List[int], List[SparsePoly]]] = {}
    for v in sorted(parent):
        groups.setdefault(find(v), ([], []))[0].append(v)
    for p in polys:
        vs = p.variables()
        if vs:
            groups[find(min(vs))][1].append(p)
    return [groups[root] for root in sorted(groups)]
