"""
Cyclotomic Arithmetic
Exact numbers in Q(zeta_m), square-root towers over them, and their complex embeddings
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import mpmath

from core.errors import DomainError, UnrepresentableError
from modules import linalg

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

# Primes p = 1 (mod m) tried before a number is rebuilt as a square
_RESIDUE_TEST_PRIMES = 8


def _poly_divide_exact(numerator: Sequence[int], denominator: Sequence[int]) -> List[int]:
    """Divide integer polynomials (lowest degree first) by a monic divisor."""
    num = list(numerator)
    quotient = [0] * (len(num) - len(denominator) + 1)
    for shift in range(len(quotient) - 1, -1, -1):
        c = num[shift + len(denominator) - 1]
        quotient[shift] = c
        if c:
            for i, d in enumerate(denominator):
                num[shift + i] -= c * d
    return quotient


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> Tuple[int, ...]:
    """
    Integer coefficients of the m-th cyclotomic polynomial

    Args:
        m: Order of the primitive root

    Returns:
        Coefficients, constant term first
    """
    if m < 1:
        raise DomainError(f"cyclotomic order must be positive, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divide_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def totient(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def _reduction_table(m: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """Canonical power-basis expansion of zeta_m^e for every e in [0, m)."""
    phi_poly = cyclotomic_polynomial(m)
    phi = len(phi_poly) - 1
    table = []
    current: Dict[int, int] = {0: 1}
    for _ in range(m):
        table.append(tuple(sorted(current.items())))
        shifted = {k + 1: v for k, v in current.items()}
        top = shifted.pop(phi, 0)
        if top:
            for i, c in enumerate(phi_poly[:-1]):
                if c:
                    shifted[i] = shifted.get(i, 0) - top * c
            shifted = {k: v for k, v in shifted.items() if v}
        current = shifted
    return tuple(table)


@lru_cache(maxsize=None)
def prime_factors(m: int) -> Tuple[int, ...]:
    factors = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            factors.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        factors.append(m)
    return tuple(factors)


def _descend(x: "CycloNumber") -> Optional["CycloNumber"]:
    """
    Rewrite x over Q(zeta_{m/p}) for the first prime p | m that allows it

    Returns:
        The lower-order number, or None when x needs all of Q(zeta_m)
    """
    m = x.order
    for p in prime_factors(m):
        n = m // p
        if n % p == 0:
            # Phi_m(X) = Phi_n(X^p): the subfield is spanned by the powers zeta_m^(p j)
            if all(e % p == 0 for e in x._coeffs):
                return CycloNumber._canonical(n, {e // p: q for e, q in x._coeffs.items()})
            continue
        # gcd(n, p) = 1: zeta_m = zeta_n^alpha * zeta_p^beta, coordinates over Q(zeta_n) are unique
        alpha, beta = pow(p, -1, n), pow(n, -1, p)
        parts: List[Dict[int, Rational]] = [{} for _ in range(p)]
        for e, q in x._coeffs.items():
            part = parts[beta * e % p]
            key = alpha * e % n
            part[key] = part.get(key, 0) + q
        over_n = [CycloNumber(n, part) for part in parts]
        top = over_n[p - 1]
        if all(over_n[k] == top for k in range(1, p - 1)):
            return over_n[0] - top
    return None


class CycloNumber:
    """Element of Q(zeta_m) in canonical power-basis form"""

    __slots__ = ("_m", "_coeffs", "_hash")

    def __init__(self, m: int, coeffs: Optional[Dict[int, Rational]] = None):
        """
        Build a cyclotomic number from arbitrary integer exponents

        Args:
            m: Cyclotomic order
            coeffs: Map exponent -> rational coefficient (any integer exponents)
        """
        self._m = m
        self._hash: Optional[int] = None
        if not coeffs:
            self._coeffs: Dict[int, Rational] = {}
            return
        table = _reduction_table(m)
        acc: Dict[int, Rational] = {}
        for e, q in coeffs.items():
            if not q:
                continue
            for k, c in table[e % m]:
                acc[k] = acc.get(k, 0) + q * c
        self._coeffs = {k: v for k, v in acc.items() if v}

    @classmethod
    def _canonical(cls, m: int, coeffs: Dict[int, Rational]) -> "CycloNumber":
        obj = cls.__new__(cls)
        obj._m = m
        obj._coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, m: int) -> "CycloNumber":
        return cls._canonical(m, {})

    @classmethod
    def one(cls, m: int) -> "CycloNumber":
        return cls._canonical(m, {0: 1})

    @classmethod
    def from_rational(cls, m: int, q: Rational) -> "CycloNumber":
        return cls._canonical(m, {0: q} if q else {})

    @property
    def order(self) -> int:
        return self._m

    @property
    def coeffs(self) -> Dict[int, Rational]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def is_rational(self) -> bool:
        return all(e == 0 for e in self._coeffs)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return Fraction(self._coeffs.get(0, 0))

    def lift(self, m: int) -> "CycloNumber":
        """Rewrite in Q(zeta_m); needs the minimal order to divide m."""
        if m == self._m:
            return self
        if m % self._m:
            low = self.minimal()
            if m % low._m:
                raise DomainError(f"{self} does not lie in Q(zeta_{m})")
            return low.lift(m)
        step = m // self._m
        return CycloNumber(m, {e * step: q for e, q in self._coeffs.items()})

    def minimal(self) -> "CycloNumber":
        """The same number written over the smallest cyclotomic field containing it."""
        x = self
        while True:
            lower = _descend(x)
            if lower is None:
                return x
            x = lower

    def _coerce(self, other) -> Optional[Tuple["CycloNumber", "CycloNumber"]]:
        if isinstance(other, CycloNumber):
            if other._m == self._m:
                return self, other
            m = self._m * other._m // gcd(self._m, other._m)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, CycloNumber.from_rational(self._m, other)
        return None

    def __eq__(self, other) -> bool:
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0]._coeffs == pair[1]._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            # equal values of different orders must collide
            if self.is_rational():
                self._hash = hash(Fraction(self._coeffs.get(0, 0)))
            else:
                low = self.minimal()
                self._hash = hash((low._m, frozenset(low._coeffs.items())))
        return self._hash

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        acc = dict(a._coeffs)
        for e, q in b._coeffs.items():
            v = acc.get(e, 0) + q
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return CycloNumber._canonical(a._m, acc)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "CycloNumber":
        return CycloNumber._canonical(self._m, {e: -q for e, q in self._coeffs.items()})

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[1] + (-pair[0])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return CycloNumber.zero(self._m)
            return CycloNumber._canonical(self._m, {e: q * other for e, q in self._coeffs.items()})
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        m = a._m
        table = _reduction_table(m)
        acc: Dict[int, Rational] = {}
        for e1, q1 in a._coeffs.items():
            for e2, q2 in b._coeffs.items():
                q = q1 * q2
                for e, c in table[(e1 + e2) % m]:
                    acc[e] = acc.get(e, 0) + q * c
        return CycloNumber._canonical(m, {e: q for e, q in acc.items() if q})

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "CycloNumber":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if not self._coeffs:
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        if len(self._coeffs) == 1:
            (e, q), = self._coeffs.items()
            # monomials q*zeta^e invert to zeta^-e / q
            return CycloNumber(self._m, {-e: 1 / Fraction(q)})
        phi = totient(self._m)
        columns = []
        for j in range(phi):
            col = (self * CycloNumber._canonical(self._m, {j: 1}))._coeffs
            columns.append([Fraction(col.get(i, 0)) for i in range(phi)])
        matrix = [[columns[j][i] for j in range(phi)] for i in range(phi)]
        rhs = [Fraction(1)] + [Fraction(0)] * (phi - 1)
        solution = linalg.solve(matrix, rhs)
        return CycloNumber._canonical(self._m, {i: q for i, q in enumerate(solution) if q})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0] * pair[1].inverse()

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[1] * pair[0].inverse()

    def __pow__(self, n: int) -> "CycloNumber":
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloNumber.one(self._m)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def galois(self, s: int) -> "CycloNumber":
        """Apply the automorphism zeta -> zeta^s (s coprime to the order)."""
        return CycloNumber(self._m, {e * s: q for e, q in self._coeffs.items()})

    def conjugate(self) -> "CycloNumber":
        return self.galois(-1)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def embed(self, precision_bits: int = 53) -> mpmath.mpc:
        """Complex value under zeta_m -> exp(2 pi i / m)."""
        with mpmath.workprec(precision_bits + 16):
            total = mpmath.mpc(0)
            for e, q in self._coeffs.items():
                q = Fraction(q)
                total += mpmath.mpf(q.numerator) / q.denominator * mpmath.expjpi(mpmath.mpf(2 * e) / self._m)
        return total

    def __complex__(self) -> complex:
        return complex(self.embed(53))

    def to_json(self) -> List[List[int]]:
        return [[e, Fraction(q).numerator, Fraction(q).denominator] for e, q in sorted(self._coeffs.items())]

    @classmethod
    def from_json(cls, m: int, data: Sequence[Sequence[int]]) -> "CycloNumber":
        return cls(m, {int(e): Fraction(int(num), int(den)) for e, num, den in data})

    def __repr__(self) -> str:
        return f"CycloNumber({self._m}, {self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for e, q in sorted(self._coeffs.items()):
            if e == 0:
                parts.append(str(q))
            elif q == 1:
                parts.append(f"z{self._m}^{e}")
            else:
                parts.append(f"{q}*z{self._m}^{e}")
        return " + ".join(parts).replace("+ -", "- ")


def zeta(m: int, e: int = 1) -> CycloNumber:
    """Return zeta_m^e in canonical form."""
    return CycloNumber(m, {e: 1})


def root_of_unity(m: int, q: Rational) -> CycloNumber:
    """
    Exact root of unity exp(2 pi i q) inside Q(zeta_m)

    Args:
        m: Cyclotomic order of the ambient field
        q: Rational number of full turns

    Returns:
        zeta_m^(q m)
    """
    turns = Fraction(q) * m
    if turns.denominator != 1:
        raise UnrepresentableError(f"exp(2 pi i * {q}) is not in Q(zeta_{m})")
    return zeta(m, int(turns))


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


@lru_cache(maxsize=None)
def _units(m: int) -> Tuple[int, ...]:
    return tuple(s for s in range(1, m) if gcd(s, m) == 1)


@lru_cache(maxsize=None)
def _inverse_embedding_norm(m: int) -> float:
    """Row-sum norm of the inverse of the matrix sending power-basis coordinates to all conjugates."""
    phi = totient(m)
    with mpmath.workdps(30):
        conjugates = mpmath.matrix(
            [[mpmath.expjpi(mpmath.mpf(2 * s * e) / m) for e in range(phi)] for s in _units(m)]
        )
        return float(mpmath.mnorm(mpmath.inverse(conjugates), mpmath.inf))


def _common_denominator(x: CycloNumber) -> int:
    den = 1
    for q in x.coeffs.values():
        d = Fraction(q).denominator
        den = den * d // gcd(den, d)
    return den


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, isqrt(n) + 1))


def _split_primes(m: int) -> Iterator[int]:
    """Primes p = 1 (mod m), in increasing order."""
    k = 1
    while True:
        if _is_prime(k * m + 1):
            yield k * m + 1
        k += 1


@lru_cache(maxsize=None)
def _root_of_unity_mod(p: int, m: int) -> int:
    for a in range(2, p):
        w = pow(a, (p - 1) // m, p)
        if all(pow(w, m // q, p) != 1 for q in prime_factors(m)):
            return w
    raise DomainError(f"no primitive {m}-th root of unity modulo {p}")


def _passes_residue_test(x: CycloNumber) -> bool:
    """
    Reduce x at every m-th root of unity modulo a few primes p = 1 (mod m)

    A square of Q(zeta_m) reduces to a square, so any quadratic non-residue
    proves x is not one. Passing only makes a square likely.
    """
    m = x.order
    den = _common_denominator(x)
    scaled = {e: int(Fraction(q) * den) for e, q in x.coeffs.items()}
    tested = 0
    for p in _split_primes(m):
        if den % p == 0:
            continue
        w = _root_of_unity_mod(p, m)
        for s in _units(m):
            ws = pow(w, s, p)
            # x = X / den and X / den is a residue exactly when X * den is
            v = sum(c * pow(ws, e, p) for e, c in scaled.items()) * den % p
            if v and pow(v, (p - 1) // 2, p) == p - 1:
                return False
        tested += 1
        if tested == _RESIDUE_TEST_PRIMES:
            return True
    return True


def _reconstruct_root(x: CycloNumber) -> Optional[CycloNumber]:
    """
    Rebuild sqrt(x) from its complex embedding with an integer relation search

    den * sqrt(x) is an algebraic integer whenever the root lies in Q(zeta_m), so
    its power-basis coordinates are integers of bounded height; the working
    precision grows with that height.
    """
    m, phi = x.order, totient(x.order)
    den = _common_denominator(x)
    largest = max(abs(complex(x.galois(s))) for s in _units(m))
    bound = int(2 * _inverse_embedding_norm(m) * den * largest ** 0.5) + 1
    digits = 2 * (phi + 2) * (len(str(bound)) + 2) + 30
    for _ in range(2):
        with mpmath.workdps(digits):
            root = mpmath.sqrt(x.embed(mpmath.mp.prec)) * den
            # pi is transcendental, so Re + pi*Im of an element of Q(zeta_m) vanishes only at zero
            basis = []
            for e in range(phi):
                z = mpmath.expjpi(mpmath.mpf(2 * e) / m)
                basis.append(z.real + mpmath.pi * z.imag)
            relation = mpmath.pslq(
                basis + [root.real + mpmath.pi * root.imag],
                maxcoeff=(phi + 1) * bound,
                maxsteps=2000 * (phi + 1),
            )
        if relation and relation[-1]:
            scale = -relation[-1] * den
            candidate = CycloNumber._canonical(
                m, {e: Fraction(r, scale) for e, r in enumerate(relation[:-1]) if r}
            )
            if candidate * candidate == x:
                return candidate
        digits *= 2
    logger.debug(f"{x} passed the residue test but no exact root was rebuilt")
    return None


def cyclo_sqrt(x: CycloNumber) -> Optional[CycloNumber]:
    """
    Exact square root inside Q(zeta_m), if one exists

    Args:
        x: Cyclotomic number

    Returns:
        Some beta with beta*beta == x, or None when x is not a square in the field
    """
    m = x.order
    if x.is_zero():
        return x
    if x.is_rational():
        q = x.rational_value()
        root = _rational_sqrt(abs(q))
        if root is not None:
            if q > 0:
                return CycloNumber.from_rational(m, root)
            if m % 4 == 0:
                return zeta(m, m // 4) * root
    if m <= 2:
        return None
    if not _passes_residue_test(x):
        return None
    return _reconstruct_root(x)



# ---------------------------------------------------------------------------
# Square-root towers
# ---------------------------------------------------------------------------

Terms = Dict[int, CycloNumber]


def _t_add(x: Terms, y: Terms) -> Terms:
    out = dict(x)
    for mask, c in y.items():
        v = out[mask] + c if mask in out else c
        if v:
            out[mask] = v
        else:
            out.pop(mask, None)
    return out


def _t_scale(x: Terms, c) -> Terms:
    out = {}
    for mask, v in x.items():
        w = v * c
        if w:
            out[mask] = w
    return out


def _t_split(x: Terms, bit: int) -> Tuple[Terms, Terms]:
    low, high = {}, {}
    for mask, c in x.items():
        if mask & bit:
            high[mask ^ bit] = c
        else:
            low[mask] = c
    return low, high


def _t_level(*xs: Terms) -> int:
    return max((mask.bit_length() for x in xs for mask in x), default=0)


class SqrtTower:
    """
    Ordered radicals y_1..y_k over Q(zeta_m) with y_i^2 = alpha_i

    Radicals are appended lazily; numbers created before an extension stay valid.
    """

    def __init__(self, m: int):
        self.order = m
        self.radicals: List["TowerNumber"] = []
        self._embedded: Dict[Tuple[int, int], mpmath.mpc] = {}

    def __len__(self) -> int:
        return len(self.radicals)

    def zero(self) -> "TowerNumber":
        return TowerNumber(self, {})

    def one(self) -> "TowerNumber":
        return TowerNumber(self, {0: CycloNumber.one(self.order)})

    def radical(self, i: int) -> "TowerNumber":
        return TowerNumber(self, {1 << i: CycloNumber.one(self.order)})

    def coerce(self, value) -> "TowerNumber":
        if isinstance(value, TowerNumber):
            if value.tower is self or self.extends(value.tower):
                return value if value.tower is self else TowerNumber(self, value._terms)
            raise DomainError("tower numbers come from incompatible radical towers")
        if isinstance(value, CycloNumber):
            if value.order != self.order:
                value = value.lift(self.order)
            return TowerNumber(self, {0: value} if value else {})
        if isinstance(value, (int, Fraction)):
            return TowerNumber(self, {0: CycloNumber.from_rational(self.order, value)} if value else {})
        raise DomainError(f"cannot coerce {type(value).__name__} into a radical tower")

    def extends(self, other: "SqrtTower") -> bool:
        """True when other's radicals are a prefix of this tower's radicals."""
        if other is self:
            return True
        if other.order != self.order or len(other.radicals) > len(self.radicals):
            return False
        return all(a._terms == b._terms for a, b in zip(other.radicals, self.radicals))

    def adjoin(self, alpha) -> "TowerNumber":
        """
        Adjoin a new radical y with y^2 = alpha

        Args:
            alpha: Nonzero element of the current tower

        Returns:
            The new radical as a tower number
        """
        alpha = self.coerce(alpha)
        if not alpha:
            raise DomainError("cannot adjoin the square root of zero")
        self.radicals.append(TowerNumber(self, alpha._terms))
        logger.info(f"Adjoined radical y{len(self.radicals)} with square {alpha}")
        return self.radical(len(self.radicals) - 1)

    def sqrt(self, value) -> Optional["TowerNumber"]:
        """Exact square root in the current tower, or None."""
        value = self.coerce(value)
        root = _t_sqrt(self, value._terms, len(self.radicals))
        return None if root is None else TowerNumber(self, root)

    def embed_radical(self, i: int, precision_bits: int) -> mpmath.mpc:
        key = (i, precision_bits)
        if key not in self._embedded:
            with mpmath.workprec(precision_bits + 16):
                self._embedded[key] = mpmath.sqrt(self.radicals[i].embed(precision_bits))
        return self._embedded[key]

    def to_json(self) -> List[list]:
        return [alpha.terms_to_json() for alpha in self.radicals]

    @classmethod
    def from_json(cls, m: int, data: Sequence[list]) -> "SqrtTower":
        tower = cls(m)
        for radical in data:
            tower.radicals.append(TowerNumber.from_terms_json(tower, radical))
        return tower

    def __repr__(self) -> str:
        return f"SqrtTower({self.order}, radicals={[str(a) for a in self.radicals]})"


def _t_mul(tower: SqrtTower, x: Terms, y: Terms) -> Terms:
    if not x or not y:
        return {}
    level = _t_level(x, y)
    if level == 0:
        v = x[0] * y[0]
        return {0: v} if v else {}
    bit = 1 << (level - 1)
    a, b = _t_split(x, bit)
    c, d = _t_split(y, bit)
    alpha = tower.radicals[level - 1]._terms
    low = _t_add(_t_mul(tower, a, c), _t_mul(tower, _t_mul(tower, b, d), alpha))
    high = _t_add(_t_mul(tower, a, d), _t_mul(tower, b, c))
    out = dict(low)
    for mask, v in high.items():
        out[mask | bit] = v
    return out


def _t_inv(tower: SqrtTower, x: Terms) -> Terms:
    if not x:
        raise ZeroDivisionError("inverse of zero in a radical tower")
    level = _t_level(x)
    if level == 0:
        return {0: x[0].inverse()}
    bit = 1 << (level - 1)
    a, b = _t_split(x, bit)
    alpha = tower.radicals[level - 1]._terms
    # (a + b y)^-1 = (a - b y) / (a^2 - b^2 alpha)
    norm = _t_add(_t_mul(tower, a, a), _t_scale(_t_mul(tower, _t_mul(tower, b, b), alpha), -1))
    inv_norm = _t_inv(tower, norm)
    conj = dict(a)
    for mask, v in b.items():
        conj[mask | bit] = -v
    return _t_mul(tower, conj, inv_norm)


def _t_sqrt(tower: SqrtTower, x: Terms, level: int) -> Optional[Terms]:
    if not x:
        return {}
    if level == 0:
        root = cyclo_sqrt(x[0])
        return None if root is None else {0: root}
    bit = 1 << (level - 1)
    a, b = _t_split(x, bit)
    alpha = tower.radicals[level - 1]._terms
    if not b:
        root = _t_sqrt(tower, a, level - 1)
        if root is not None:
            return root
        root = _t_sqrt(tower, _t_mul(tower, a, _t_inv(tower, alpha)), level - 1)
        if root is None:
            return None
        return {mask | bit: v for mask, v in root.items()}
    # (c + d y)^2 = a + b y  gives  c^2 = (a +- sqrt(a^2 - b^2 alpha)) / 2,  d = b / 2c
    norm = _t_add(_t_mul(tower, a, a), _t_scale(_t_mul(tower, _t_mul(tower, b, b), alpha), -1))
    s = _t_sqrt(tower, norm, level - 1)
    if s is None:
        return None
    for sign in (1, -1):
        c_squared = _t_scale(_t_add(a, _t_scale(s, sign)), Fraction(1, 2))
        if not c_squared:
            continue
        c = _t_sqrt(tower, c_squared, level - 1)
        if c is None:
            continue
        d = _t_mul(tower, b, _t_inv(tower, _t_scale(c, 2)))
        out = dict(c)
        for mask, v in d.items():
            out[mask | bit] = v
        return out
    return None


class TowerNumber:
    """Element of Q(zeta_m)(y_1, ..., y_k), multilinear in the radicals"""

    __slots__ = ("tower", "_terms", "_hash")

    def __init__(self, tower: SqrtTower, terms: Terms):
        self.tower = tower
        self._terms = {mask: c for mask, c in terms.items() if c}
        self._hash: Optional[int] = None

    @property
    def terms(self) -> Terms:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_cyclotomic(self) -> bool:
        return all(mask == 0 for mask in self._terms)

    def cyclo_value(self) -> CycloNumber:
        if not self.is_cyclotomic():
            raise DomainError(f"{self} involves adjoined radicals")
        return self._terms.get(0, CycloNumber.zero(self.tower.order))

    def _coerce(self, other) -> Optional[Tuple["TowerNumber", "TowerNumber"]]:
        if isinstance(other, TowerNumber):
            if other.tower is self.tower:
                return self, other
            if self.tower.extends(other.tower):
                return self, self.tower.coerce(other)
            if other.tower.extends(self.tower):
                return other.tower.coerce(self), other
            raise DomainError("tower numbers come from incompatible radical towers")
        if isinstance(other, (CycloNumber, int, Fraction)):
            return self, self.tower.coerce(other)
        return None

    def __eq__(self, other) -> bool:
        try:
            pair = self._coerce(other)
        except DomainError:
            return False
        if pair is None:
            return NotImplemented
        return pair[0]._terms == pair[1]._terms

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_cyclotomic():
                self._hash = hash(self._terms.get(0, 0))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return TowerNumber(pair[0].tower, _t_add(pair[0]._terms, pair[1]._terms))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "TowerNumber":
        return TowerNumber(self.tower, {mask: -c for mask, c in self._terms.items()})

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[1] + (-pair[0])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TowerNumber(self.tower, _t_scale(self._terms, other))
        if isinstance(other, CycloNumber):
            # coefficients stay in Q(zeta_m) of this tower; foreign orders raise DomainError
            return TowerNumber(self.tower, _t_scale(self._terms, self.tower.coerce(other).cyclo_value()))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return TowerNumber(pair[0].tower, _t_mul(pair[0].tower, pair[0]._terms, pair[1]._terms))

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "TowerNumber":
        return TowerNumber(self.tower, _t_inv(self.tower, self._terms))

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0] * pair[1].inverse()

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[1] * pair[0].inverse()

    def __pow__(self, n: int) -> "TowerNumber":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "TowerNumber":
        """
        Complex conjugate, defined when every radicand in use is real

        Returns:
            Conjugate tower number (y_i maps to +-y_i by the sign of alpha_i)
        """
        out: Terms = {}
        for mask, c in self._terms.items():
            term = {0: c.conjugate()}
            for i in range(mask.bit_length()):
                if mask >> i & 1:
                    term = _t_mul(self.tower, term, {1 << i: CycloNumber.one(self.tower.order) * self._radical_conjugation_sign(i)})
            out = _t_add(out, term)
        return TowerNumber(self.tower, out)

    def _radical_conjugation_sign(self, i: int) -> int:
        alpha = self.tower.radicals[i]
        if alpha.conjugate() != alpha:
            raise DomainError(f"radical y{i + 1} has a non-real square; conjugation leaves the tower")
        return 1 if alpha.embed(64).real > 0 else -1

    def is_real(self) -> bool:
        try:
            return self == self.conjugate()
        except DomainError:
            return abs(self.embed(64).imag) < 1e-15

    def embed(self, precision_bits: int = 53) -> mpmath.mpc:
        """Complex value with principal square roots for every radical."""
        with mpmath.workprec(precision_bits + 16):
            total = mpmath.mpc(0)
            for mask, c in self._terms.items():
                term = c.embed(precision_bits)
                for i in range(mask.bit_length()):
                    if mask >> i & 1:
                        term *= self.tower.embed_radical(i, precision_bits)
                total += term
        return total

    def __complex__(self) -> complex:
        return complex(self.embed(53))

    def terms_to_json(self) -> List[list]:
        return [[mask, c.to_json()] for mask, c in sorted(self._terms.items())]

    @classmethod
    def from_terms_json(cls, tower: SqrtTower, data: Sequence[list]) -> "TowerNumber":
        return cls(tower, {int(mask): CycloNumber.from_json(tower.order, coeffs) for mask, coeffs in data})

    def to_json(self) -> dict:
        return {
            "cyclo_order": self.tower.order,
            "radicals": self.tower.to_json(),
            "terms": self.terms_to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TowerNumber":
        tower = SqrtTower.from_json(int(data["cyclo_order"]), data.get("radicals", []))
        return cls.from_terms_json(tower, data["terms"])

    def __repr__(self) -> str:
        return f"TowerNumber({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mask, c in sorted(self._terms.items()):
            radicals = "*".join(f"y{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1)
            if not radicals:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{radicals}")
        return " + ".join(parts)


def embed(x, precision_bits: int = 53) -> mpmath.mpc:
    """Embed a rational, cyclotomic or tower number into the complex numbers."""
    if isinstance(x, (CycloNumber, TowerNumber)):
        return x.embed(precision_bits)
    q = Fraction(x)
    with mpmath.workprec(precision_bits + 16):
        return mpmath.mpc(mpmath.mpf(q.numerator) / q.denominator)
