"""
Groebner Bases
Buchberger's algorithm over sparse polynomials in degrevlex order
"""

import heapq
import logging
from typing import Dict, List, Optional, Sequence, Set, Tuple

from modules.sparsepoly import (
    ExpVec,
    SparsePoly,
    _inverse,
    degrevlex_key,
    mono_degree,
    mono_div,
    mono_divides,
    mono_gcd,
    mono_lcm,
    mono_mul,
)

logger = logging.getLogger(__name__)


def normal_form(f: SparsePoly, basis: Sequence[SparsePoly]) -> SparsePoly:
    """
    Fully reduce f modulo a list of polynomials

    Args:
        f: Polynomial to reduce
        basis: Nonzero divisors (need not be monic)

    Returns:
        Remainder with no term divisible by a leading monomial of the basis
    """
    leads = [(g.leading_monomial, g.leading_coefficient, g.term_map()) for g in basis if g]
    work: Dict[ExpVec, object] = f.term_map()
    remainder: Dict[ExpVec, object] = {}
    while work:
        lm = max(work, key=degrevlex_key)
        lc = work[lm]
        for glm, glc, gterms in leads:
            if mono_divides(glm, lm):
                shift = mono_div(lm, glm)
                factor = lc if glc == 1 else lc * _inverse(glc)
                for exps, c in gterms.items():
                    key = mono_mul(exps, shift)
                    v = work[key] - factor * c if key in work else -(factor * c)
                    if v:
                        work[key] = v
                    else:
                        work.pop(key, None)
                break
        else:
            remainder[lm] = work.pop(lm)
    return SparsePoly(f.nvars, remainder)


def s_polynomial(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    lcm = mono_lcm(f.leading_monomial, g.leading_monomial)
    left = f.mul_monomial(mono_div(lcm, f.leading_monomial)).scale(g.leading_coefficient)
    right = g.mul_monomial(mono_div(lcm, g.leading_monomial)).scale(f.leading_coefficient)
    return left - right


def reduce_basis(basis: Sequence[SparsePoly]) -> List[SparsePoly]:
    """Turn a Groebner basis into the unique reduced one, sorted by leading monomial."""
    ordered = sorted((g.monic() for g in basis if g), key=lambda g: degrevlex_key(g.leading_monomial))
    minimal: List[SparsePoly] = []
    for g in ordered:
        if not any(mono_divides(h.leading_monomial, g.leading_monomial) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        reduced.append(normal_form(g, others).monic())
    return sorted(reduced, key=lambda g: degrevlex_key(g.leading_monomial), reverse=True)


def buchberger(
    polys: Sequence[SparsePoly],
    var_limit: Optional[int] = None,
    pair_limit: Optional[int] = None,
) -> Optional[List[SparsePoly]]:
    """
    Reduced Groebner basis of the ideal generated by polys

    Args:
        polys: Generators
        var_limit: Skip (return None) when more distinct variables are present
        pair_limit: Skip (return None) after this many nonzero S-pair remainders

    Returns:
        Reduced degrevlex Groebner basis, [1] for the unit ideal, or None when skipped
    """
    seen: Set[SparsePoly] = set()
    basis: List[SparsePoly] = []
    for p in polys:
        if not p:
            continue
        q = p.monic()
        if q not in seen:
            seen.add(q)
            basis.append(q)
    if not basis:
        return []

    variables = set().union(*(p.variables() for p in basis))
    if var_limit is not None and len(variables) > var_limit:
        logger.debug(f"Skipping component with {len(variables)} variables (limit {var_limit})")
        return None

    for p in basis:
        if p.is_constant():
            return [p.monic()]

    pending: Set[Tuple[int, int]] = set()
    heap: List[tuple] = []

    def push(i: int, j: int) -> None:
        lcm = mono_lcm(basis[i].leading_monomial, basis[j].leading_monomial)
        pending.add((i, j))
        heapq.heappush(heap, (mono_degree(lcm), i, j))

    for j in range(len(basis)):
        for i in range(j):
            push(i, j)

    added = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        lmi, lmj = basis[i].leading_monomial, basis[j].leading_monomial

        # Coprime leading monomials reduce to zero
        if not mono_gcd(lmi, lmj):
            continue

        # Chain criterion
        lcm = mono_lcm(lmi, lmj)
        if any(
            k != i and k != j
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            and mono_divides(basis[k].leading_monomial, lcm)
            for k in range(len(basis))
        ):
            continue

        r = normal_form(s_polynomial(basis[i], basis[j]), basis)
        if not r:
            continue
        r = r.monic()
        if r.is_constant():
            return [r]
        basis.append(r)
        added += 1
        if pair_limit is not None and added > pair_limit:
            logger.debug(f"Skipping component after {added} basis extensions")
            return None
        n = len(basis) - 1
        for k in range(n):
            push(k, n)

    return reduce_basis(basis)
