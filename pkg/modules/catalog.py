"""
Fusion Ring Catalog
Labels, fusion rules, duality, R-symbols, twists and pivotal signs of the built-in anyon models
"""

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

import config
from core.errors import DataError, DomainError, RingNotFoundError
from modules.cyclo import CycloNumber, zeta
from utils.file_io import read_ring_file

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]
Sextuple = Tuple[int, int, int, int, int, int]

# Display names for SU(2)_4, matching the usual X_e / Y / X_e' / Z notation
SU2_4_NAMES = ("one", "X_e", "Y", "X_ep", "Z")

_SU2_PATTERN = re.compile(r"^su2-(\d+)$")


@dataclass(frozen=True)
class Label:
    """A simple object of a fusion ring"""

    index: int
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class FusionRingData:
    """
    Multiplicity-free fusion ring with braiding data

    R-symbols and twists are stored as rational exponents q with value exp(2 pi i q),
    so every value lives in Q(zeta_m) for m = cyclo_order.
    """

    name: str
    labels: Tuple[Label, ...]
    triples: FrozenSet[Triple]
    vacuum: int
    dual: Tuple[int, ...]
    cyclo_order: int
    r_exponents: Mapping[Triple, Fraction]
    twist_exponents: Tuple[Fraction, ...]
    pivotal: Tuple[int, ...]
    _fusion: Tuple[Tuple[Tuple[int, ...], ...], ...] = field(init=False, repr=False)
    _by_name: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.labels)
        fusion = tuple(
            tuple(tuple(c for c in range(n) if (a, b, c) in self.triples) for b in range(n))
            for a in range(n)
        )
        object.__setattr__(self, "_fusion", fusion)
        object.__setattr__(self, "_by_name", {label.name: label.index for label in self.labels})

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def vacuum_label(self) -> Label:
        return self.labels[self.vacuum]

    @property
    def names(self) -> List[str]:
        return [label.name for label in self.labels]

    def index_of(self, x: Union[Label, int, str]) -> int:
        """Resolve a Label, index or name to a label index of this ring."""
        if isinstance(x, Label):
            if x.index >= self.rank or self.labels[x.index] != x:
                raise DomainError(f"label {x.name!r} does not belong to ring {self.name!r}")
            return x.index
        if isinstance(x, str):
            if x in self._by_name:
                return self._by_name[x]
            raise DomainError(f"ring {self.name!r} has no label named {x!r}")
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.rank:
            return x
        raise DomainError(f"{x!r} is not a label of ring {self.name!r}")

    def label(self, x: Union[Label, int, str]) -> Label:
        return self.labels[self.index_of(x)]

    def fuse_indices(self, a: int, b: int) -> Tuple[int, ...]:
        return self._fusion[a][b]

    def fusion_coefficient(self, a: int, b: int, c: int) -> int:
        return 1 if (a, b, c) in self.triples else 0

    def admissible(self, a: int, b: int, c: int, d: int, e: int, f: int) -> bool:
        t = self.triples
        return (a, b, e) in t and (e, c, d) in t and (b, c, f) in t and (a, f, d) in t

    def has_vacuum(self, *labels: int) -> bool:
        return self.vacuum in labels

    def r_symbol(self, a: int, b: int, c: int) -> CycloNumber:
        """R^{ab}_c as an exact root of unity."""
        try:
            q = self.r_exponents[(a, b, c)]
        except KeyError:
            raise DataError(f"ring {self.name!r} has no R-symbol for ({a}, {b}, {c})")
        return _root(self.cyclo_order, q)

    def r_inverse(self, a: int, b: int, c: int) -> CycloNumber:
        try:
            q = self.r_exponents[(a, b, c)]
        except KeyError:
            raise DataError(f"ring {self.name!r} has no R-symbol for ({a}, {b}, {c})")
        return _root(self.cyclo_order, -q)

    def twist(self, a: int) -> CycloNumber:
        return _root(self.cyclo_order, self.twist_exponents[a])

    def __repr__(self) -> str:
        return f"FusionRingData({self.name!r}, labels={self.names})"


def _root(m: int, q: Fraction) -> CycloNumber:
    turns = q * m
    if turns.denominator != 1:
        raise DataError(f"exponent {q} is not representable in Q(zeta_{m})")
    return zeta(m, int(turns))


def fuse(ring: FusionRingData, a: Union[Label, int, str], b: Union[Label, int, str]) -> List[Label]:
    """
    Fusion channels of a x b

    Args:
        ring: Fusion ring
        a: First label
        b: Second label

    Returns:
        All c with N^{ab}_c = 1 in label-index order
    """
    ia, ib = ring.index_of(a), ring.index_of(b)
    return [ring.labels[c] for c in ring.fuse_indices(ia, ib)]


def is_admissible_sextuple(ring: FusionRingData, sextuple: Sequence[Union[Label, int, str]]) -> bool:
    """True iff N^{ab}_e = N^{ec}_d = N^{bc}_f = N^{af}_d = 1."""
    if len(sextuple) != 6:
        raise DomainError(f"expected six labels, got {len(sextuple)}")
    a, b, c, d, e, f = (ring.index_of(x) for x in sextuple)
    return ring.admissible(a, b, c, d, e, f)


@lru_cache(maxsize=32)
def _sextuple_index(ring: FusionRingData) -> Tuple[Tuple[Sextuple, ...], Dict[Sextuple, int]]:
    n = ring.rank
    vac = ring.vacuum
    forward = []
    for a, b, c in product(range(n), repeat=3):
        if vac in (a, b, c):
            continue
        for e in ring.fuse_indices(a, b):
            for d in ring.fuse_indices(e, c):
                for f in ring.fuse_indices(b, c):
                    if (a, f, d) in ring.triples:
                        forward.append((a, b, c, d, e, f))
    forward.sort()
    return tuple(forward), {s: i for i, s in enumerate(forward)}


def index_sextuples(ring: FusionRingData) -> Tuple[Tuple[Sextuple, ...], Dict[Sextuple, int]]:
    """
    Enumerate the F-symbol unknowns

    Returns:
        Admissible sextuples with a, b, c all non-vacuum in lexicographic order,
        and the inverse map sextuple -> index
    """
    return _sextuple_index(ring)


# ---------------------------------------------------------------------------
# Axiom checks
# ---------------------------------------------------------------------------

@dataclass
class AxiomFailure:
    check: str
    witness: tuple
    detail: str = ""


@dataclass
class RingAxiomReport:
    ring: str
    checks: Dict[str, bool] = field(default_factory=dict)
    failures: List[AxiomFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, check: str, witness: tuple, detail: str = "") -> None:
        self.checks[check] = False
        self.failures.append(AxiomFailure(check, witness, detail))

    def failures_for(self, check: str) -> List[AxiomFailure]:
        return [f for f in self.failures if f.check == check]

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "passed": self.passed,
            "checks": self.checks,
            "failures": [{"check": f.check, "witness": list(f.witness), "detail": f.detail} for f in self.failures],
        }


_RING_CHECKS = (
    "labels", "commutativity", "associativity", "unit", "duality",
    "r_symbols", "pivotal", "twists", "balancing",
)


def verify_ring_axioms(ring: FusionRingData) -> RingAxiomReport:
    """
    Exhaustively check the fusion-ring invariants

    Args:
        ring: Ring to check

    Returns:
        Report with one entry per failing witness (never raises)
    """
    report = RingAxiomReport(ring.name, {name: True for name in _RING_CHECKS})
    n = ring.rank
    t = ring.triples
    vac = ring.vacuum
    m = ring.cyclo_order

    names = ring.names
    if len(set(names)) != n:
        report.fail("labels", tuple(names), "label names are not unique")
    for i, label in enumerate(ring.labels):
        if label.index != i:
            report.fail("labels", (i,), f"label {label.name!r} carries index {label.index}")
    if not 0 <= vac < n:
        report.fail("labels", (vac,), "vacuum index out of range")
        return report
    for triple in t:
        if any(not 0 <= x < n for x in triple):
            report.fail("labels", triple, "fusion triple outside the label set")

    for a, b, c in product(range(n), repeat=3):
        if ((a, b, c) in t) != ((b, a, c) in t):
            report.fail("commutativity", (a, b, c), "N^{ab}_c != N^{ba}_c")

    for a, b, c, e in product(range(n), repeat=4):
        left = sum(1 for d in range(n) if (a, b, d) in t and (d, c, e) in t)
        right = sum(1 for d in range(n) if (b, c, d) in t and (a, d, e) in t)
        if left != right:
            report.fail("associativity", (a, b, c, e), f"{left} != {right}")

    for a, b in product(range(n), repeat=2):
        expected = a == b
        if ((a, vac, b) in t) != expected or ((vac, a, b) in t) != expected:
            report.fail("unit", (a, b), "vacuum does not act as the identity")

    if len(ring.dual) != n:
        report.fail("duality", (), "dual map has the wrong length")
    else:
        for a in range(n):
            da = ring.dual[a]
            if not 0 <= da < n or ring.dual[da] != a:
                report.fail("duality", (a,), "dual is not an involution")
                continue
            for b in range(n):
                if ((a, b, vac) in t) != (b == da):
                    report.fail("duality", (a, b), "N^{ab}_1 = 1 must hold exactly for b = dual(a)")
        if ring.dual[vac] != vac:
            report.fail("duality", (vac,), "dual does not fix the vacuum")

    for triple in sorted(t):
        q = ring.r_exponents.get(triple)
        if q is None:
            report.fail("r_symbols", triple, "missing R-symbol on an admissible triple")
        elif (Fraction(q) * m).denominator != 1:
            report.fail("r_symbols", triple, f"R exponent {q} is not a multiple of 1/{m}")
    for triple in sorted(set(ring.r_exponents) - set(t)):
        report.fail("r_symbols", triple, "R-symbol on an inadmissible triple")
    for a in range(n):
        for key in ((a, vac, a), (vac, a, a)):
            if key in ring.r_exponents and Fraction(ring.r_exponents[key]) % 1:
                report.fail("r_symbols", key, "braiding with the vacuum must be trivial")

    if len(ring.pivotal) != n or any(s not in (1, -1) for s in ring.pivotal):
        report.fail("pivotal", (), "pivotal signs must be +1 or -1 for every label")
    elif ring.pivotal[vac] != 1:
        report.fail("pivotal", (vac,), "t_1 must be +1")

    if len(ring.twist_exponents) != n:
        report.fail("twists", (), "twist list has the wrong length")
        return report
    if Fraction(ring.twist_exponents[vac]) % 1:
        report.fail("twists", (vac,), "theta_1 must be 1")
    for a in range(n):
        if (Fraction(ring.twist_exponents[a]) * m).denominator != 1:
            report.fail("twists", (a,), "twist not representable in Q(zeta_m)")

    # R^{ab}_c R^{ba}_c = theta_c / (theta_a theta_b)
    theta = ring.twist_exponents
    for a, b, c in sorted(t):
        if (a, b, c) not in ring.r_exponents or (b, a, c) not in ring.r_exponents:
            continue
        lhs = Fraction(ring.r_exponents[(a, b, c)]) + Fraction(ring.r_exponents[(b, a, c)])
        rhs = Fraction(theta[c]) - Fraction(theta[a]) - Fraction(theta[b])
        if (lhs - rhs) % 1:
            report.fail("balancing", (a, b, c), f"R^{{ab}}_c R^{{ba}}_c has phase {lhs % 1}, expected {rhs % 1}")

    return report


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def ring_from_dict(data: Mapping) -> FusionRingData:
    """
    Build a ring from its JSON definition

    Labels inside N, r_symbols, twists, pivotal and dual may be given by name or index.
    """
    try:
        names = [str(x) for x in data["labels"]]
        by_name = {name: i for i, name in enumerate(names)}

        def idx(x) -> int:
            if isinstance(x, str) and x in by_name:
                return by_name[x]
            if isinstance(x, int) and 0 <= x < len(names):
                return x
            raise DataError(f"unknown label {x!r}")

        labels = tuple(Label(i, name) for i, name in enumerate(names))
        triples = frozenset((idx(a), idx(b), idx(c)) for a, b, c in data["N"])
        vacuum = idx(data.get("vacuum", names[0]))

        if "dual" in data:
            dual_data = data["dual"]
            if isinstance(dual_data, Mapping):
                dual = tuple(idx(dual_data[name]) for name in names)
            else:
                dual = tuple(idx(x) for x in dual_data)
        else:
            dual = tuple(
                next((b for b in range(len(names)) if (a, b, vacuum) in triples), a) for a in range(len(names))
            )

        r_exponents = {}
        for a, b, c, num, den in data["r_symbols"]:
            r_exponents[(idx(a), idx(b), idx(c))] = Fraction(int(num), int(den)) % 1

        twists_data = data.get("twists", {})
        if isinstance(twists_data, Mapping):
            twists = tuple(Fraction(*map(int, twists_data.get(name, (0, 1)))) % 1 for name in names)
        else:
            twists = tuple(Fraction(int(num), int(den)) % 1 for num, den in twists_data)

        pivotal_data = data.get("pivotal", {})
        if isinstance(pivotal_data, Mapping):
            pivotal = tuple(int(pivotal_data.get(name, 1)) for name in names)
        else:
            pivotal = tuple(int(s) for s in pivotal_data)

        return FusionRingData(
            name=str(data["name"]),
            labels=labels,
            triples=triples,
            vacuum=vacuum,
            dual=dual,
            cyclo_order=int(data["cyclo_order"]),
            r_exponents=r_exponents,
            twist_exponents=twists,
            pivotal=pivotal,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"malformed ring definition: {e}")


def ring_to_dict(ring: FusionRingData) -> dict:
    names = ring.names
    return {
        "name": ring.name,
        "labels": names,
        "vacuum": names[ring.vacuum],
        "N": [[names[a], names[b], names[c]] for a, b, c in sorted(ring.triples)],
        "dual": [names[d] for d in ring.dual],
        "cyclo_order": ring.cyclo_order,
        "r_symbols": [
            [names[a], names[b], names[c], q.numerator, q.denominator]
            for (a, b, c), q in sorted(ring.r_exponents.items())
        ],
        "twists": {names[a]: [q.numerator, q.denominator] for a, q in enumerate(ring.twist_exponents)},
        "pivotal": {names[a]: s for a, s in enumerate(ring.pivotal)},
    }


def ring_hash(ring: FusionRingData) -> str:
    """Content hash of the canonical ring definition."""
    payload = json.dumps(ring_to_dict(ring), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def load_ring(path: Union[str, Path]) -> FusionRingData:
    """Load and validate a ring definition file."""
    return _validated(ring_from_dict(read_ring_file(path)))


def _validated(ring: FusionRingData) -> FusionRingData:
    report = verify_ring_axioms(ring)
    if not report.passed:
        first = report.failures[0]
        raise DataError(f"ring {ring.name!r} fails {first.check} at {first.witness}: {first.detail}")
    return ring


# ---------------------------------------------------------------------------
# Built-in rings
# ---------------------------------------------------------------------------

def su2_level(k: int) -> FusionRingData:
    """
    SU(2)_k with twice-spin labels 0..k

    Args:
        k: Level (k >= 1)

    Returns:
        Ring over Q(zeta_{8(k+2)}) with R^{ab}_c = exp 2 pi i [(h_c - h_a - h_b) + (c - a - b)/4]
    """
    if k < 1:
        raise RingNotFoundError(f"su2-{k}: level must be at least 1")
    n = k + 1
    names = SU2_4_NAMES if k == 4 else tuple(str(j) for j in range(n))
    triples = frozenset(
        (a, b, c)
        for a, b in product(range(n), repeat=2)
        for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2)
    )

    def h(j: int) -> Fraction:
        # conformal weight j(j+2) / 4(k+2) in twice-spin units
        return Fraction(j * (j + 2), 4 * (k + 2))

    r_exponents = {
        (a, b, c): (Fraction(1, 2) * (h(c) - h(a) - h(b)) + Fraction(c - a - b, 4)) % 1
        for a, b, c in triples
    }
    return FusionRingData(
        name=f"su2-{k}",
        labels=tuple(Label(i, name) for i, name in enumerate(names)),
        triples=triples,
        vacuum=0,
        dual=tuple(range(n)),
        cyclo_order=8 * (k + 2),
        r_exponents=r_exponents,
        twist_exponents=tuple(h(j) % 1 for j in range(n)),
        pivotal=(1,) * n,
    )


def builtin_names() -> List[str]:
    files = sorted(p.stem for p in config.RINGS_DIR.glob("*.json"))
    return files + [f"su2-{k}" for k in range(1, 6)]


@lru_cache(maxsize=None)
def builtin(name: str) -> FusionRingData:
    """
    Look up a catalog ring

    Args:
        name: "fibonacci", "ising" or "su2-k" for k >= 1

    Returns:
        Validated ring data
    """
    key = name.strip().lower()
    data_file = config.RINGS_DIR / f"{key}.json"
    if data_file.exists():
        return load_ring(data_file)
    match = _SU2_PATTERN.match(key)
    if match:
        return _validated(su2_level(int(match.group(1))))
    raise RingNotFoundError(f"unknown ring {name!r}; known rings: {', '.join(builtin_names())}")


def resolve_ring(ring_ref: str) -> FusionRingData:
    """Catalog name or path to a ring definition file."""
    path = Path(ring_ref)
    if path.suffix == ".json" and path.exists():
        return load_ring(path)
    return builtin(ring_ref)
