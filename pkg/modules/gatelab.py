"""
Gate Lab
Group orders, phase-insensitive gate comparison and brute-force weave search on braid images
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

import config
from core.errors import DataError, DomainError
from modules import linalg
from modules.braidrep import BraidRep
from modules.cyclo import CycloNumber, TowerNumber
from services.worker_pool import WorkerPool
from utils.file_io import load_json

logger = logging.getLogger(__name__)

MODES = ("up-to-phase", "exact-phase")
ROUND_DECIMALS = 8
EXACT_TYPES = (CycloNumber, TowerNumber, int, Fraction)

MatrixLike = Union[np.ndarray, List[List[object]]]


@dataclass
class GateTarget:
    """A unitary to approximate, compared either exactly or up to a global phase"""

    matrix: np.ndarray
    mode: str = "up-to-phase"
    tolerance: float = 1e-8
    name: str = "target"

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        if self.mode not in MODES:
            raise DomainError(f"unknown comparison mode {self.mode!r}, expected one of {MODES}")
        n, m = self.matrix.shape
        if n != m:
            raise DomainError(f"target must be square, got {n}x{m}")
        defect = np.linalg.norm(self.matrix.conj().T @ self.matrix - np.eye(n), ord=2)
        if defect > self.tolerance:
            raise DomainError(f"target {self.name} is not unitary (defect {defect:.2e})")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_json(cls, data: dict, name: str = "target") -> "GateTarget":
        """
        Build a target from {"matrix": [[...]], "mode": ..., "tolerance": ...}

        Entries may be numbers, [re, im] pairs or strings such as "0+1j".
        """
        if "matrix" not in data:
            raise DataError("target file has no 'matrix' entry")
        rows = [[_parse_entry(x) for x in row] for row in data["matrix"]]
        return cls(
            matrix=np.array(rows, dtype=np.complex128),
            mode=data.get("mode", "up-to-phase"),
            tolerance=float(data.get("tolerance", 1e-8)),
            name=data.get("name", name),
        )

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "GateTarget":
        path = Path(path)
        if not path.exists():
            key = (path.stem if path.suffix == ".json" else str(path)).lower()
            named = {name.lower(): name for name in NAMED_TARGETS}
            if key in named:
                return named_target(named[key])
            raise DataError(f"target file not found: {path}")
        return cls.from_json(load_json(path), name=path.stem)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in self.matrix],
        }


def _parse_entry(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise DataError(f"complex entry must be [re, im], got {x}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        try:
            return complex(x.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise DataError(f"cannot parse matrix entry {x!r}")
    return complex(x)


NAMED_TARGETS: Dict[str, List[List[complex]]] = {
    "iX": [[0, 1j], [1j, 0]],
    "X": [[0, 1], [1, 0]],
    "Z": [[1, 0], [0, -1]],
    "H": [[2 ** -0.5, 2 ** -0.5], [2 ** -0.5, -(2 ** -0.5)]],
}


def named_target(name: str, mode: str = "up-to-phase") -> GateTarget:
    if name not in NAMED_TARGETS:
        raise DomainError(f"unknown target {name!r}; known: {', '.join(NAMED_TARGETS)}")
    return GateTarget(np.array(NAMED_TARGETS[name], dtype=np.complex128), mode=mode, name=name)


def _as_numpy(a: MatrixLike) -> np.ndarray:
    if isinstance(a, np.ndarray):
        return a.astype(np.complex128)
    if _is_exact(a):
        return linalg.to_numpy(a)
    return np.array(a, dtype=np.complex128)


def _is_exact(a: MatrixLike) -> bool:
    return not isinstance(a, np.ndarray) and all(isinstance(x, EXACT_TYPES) for row in a for x in row)


def phase_distance(a: MatrixLike, b: MatrixLike) -> float:
    """
    Operator-norm distance between a and b up to a global phase

    The phase is the trace-aligned one, lambda = tr(b^H a) / |tr(b^H a)|,
    falling back to 1 when the overlap vanishes.
    """
    a, b = _as_numpy(a), _as_numpy(b)
    if a.shape != b.shape:
        raise DomainError(f"cannot compare {a.shape} with {b.shape}")
    overlap = np.trace(b.conj().T @ a)
    lam = overlap / abs(overlap) if abs(overlap) > 1e-12 else 1.0
    return float(np.linalg.norm(a - lam * b, ord=2))


def word_matrix(rep: BraidRep, word: Sequence[int], phase=None) -> List[List[object]]:
    """
    Exact product sigma_{w_0} sigma_{w_1} ... in the tower

    Args:
        rep: Braid representation
        word: Signed generator indices; -j stands for the inverse of sigma_j
        phase: Optional scalar; every sigma_j is divided by it (sigma_j^-1 multiplied)

    Returns:
        The product matrix; the identity for the empty word
    """
    one = rep.generators[0][0][0] * 0 + 1
    result = linalg.identity(rep.dimension, one)
    for j in word:
        result = linalg.matmul(result, rep.sigma(j))
    if phase is not None and word:
        power = sum(1 if j > 0 else -1 for j in word)
        if power:
            scalar = phase ** abs(power)
            result = linalg.divide(result, scalar) if power > 0 else linalg.scale(result, scalar)
    return result


@dataclass
class ClosureResult:
    order: Optional[int]
    cap: int
    exact: bool

    @property
    def exceeded(self) -> bool:
        return self.order is None

    def to_dict(self) -> dict:
        return {"order": self.order if self.order is not None else "exceeds cap", "cap": self.cap, "exact": self.exact}


class _NumericKeys:
    """Rounded-embedding set with an allclose re-check inside each bucket"""

    def __init__(self):
        self.buckets: Dict[bytes, List[np.ndarray]] = {}

    def add(self, m: np.ndarray) -> bool:
        key = (np.round(m, ROUND_DECIMALS) + 0.0).tobytes()
        bucket = self.buckets.setdefault(key, [])
        if any(np.allclose(m, other, atol=10.0 ** -ROUND_DECIMALS) for other in bucket):
            return False
        bucket.append(m)
        return True


def group_closure(generators: Sequence[MatrixLike], phase=None, cap: Optional[int] = None) -> ClosureResult:
    """
    Order of the matrix group generated by generators (each divided by phase)

    Exact matrices are deduplicated by exact equality; numpy input falls back to
    rounded keys with a closeness re-check.

    Args:
        generators: Square invertible matrices of one size
        phase: Optional scalar divided out of every generator
        cap: Stop once the group exceeds this many elements

    Returns:
        ClosureResult whose order is None when the cap was exceeded
    """
    cap = cap or config.CLOSURE_CAP
    if not generators:
        raise DomainError("group_closure needs at least one generator")
    exact = all(_is_exact(g) for g in generators)
    if exact:
        gens = [linalg.divide(g, phase) if phase is not None else g for g in generators]
        one = gens[0][0][0] * 0 + 1
        start = linalg.identity(len(gens[0]), one)
        seen = {_exact_key(start)}
        frontier = [start]
        mul = linalg.matmul
        add = lambda m: _add_exact(seen, m)
    else:
        gens = [_as_numpy(g) / (complex(phase) if phase is not None else 1.0) for g in generators]
        start = np.eye(gens[0].shape[0], dtype=np.complex128)
        keys = _NumericKeys()
        keys.add(start)
        frontier = [start]
        mul = np.matmul
        add = keys.add

    size = 1
    while frontier:
        next_frontier = []
        for element in frontier:
            for g in gens:
                candidate = mul(element, g)
                if add(candidate):
                    size += 1
                    if size > cap:
                        logger.info(f"Closure exceeded cap {cap}")
                        return ClosureResult(None, cap, exact)
                    next_frontier.append(candidate)
        frontier = next_frontier
        logger.debug(f"Closure at {size} elements, frontier {len(frontier)}")
    logger.info(f"Closure terminated with order {size}")
    return ClosureResult(size, cap, exact)


def _exact_key(m) -> tuple:
    return tuple(tuple(row) for row in m)


def _add_exact(seen: set, m) -> bool:
    key = _exact_key(m)
    if key in seen:
        return False
    seen.add(key)
    return True


@dataclass
class WeaveResult:
    found: bool
    pattern: List[int] = field(default_factory=list)
    word: List[int] = field(default_factory=list)
    distance: Optional[float] = None
    matrix: Optional[np.ndarray] = None
    searched: int = 0

    def to_dict(self) -> dict:
        if not self.found:
            return {"found": False, "word": None, "distance": None, "searched": self.searched}
        return {
            "found": True,
            "pattern": self.pattern,
            "word": self.word,
            "distance": self.distance,
            "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in self.matrix],
            "searched": self.searched,
        }


def pattern_to_word(pattern: Sequence[int]) -> List[int]:
    """Weave sigma_{2}^{p_{L-1}} ... sigma_{1}^{p_0} as a left-to-right signed word."""
    word = []
    for j in reversed(range(len(pattern))):
        gen = j % 2 + 1
        p = pattern[j]
        word.extend([gen if p > 0 else -gen] * abs(p))
    return word


def _block_products(powers: np.ndarray, start: int, length: int) -> np.ndarray:
    """All products over pattern positions start..start+length-1, lex order with earlier positions major."""
    d = powers.shape[-1]
    block = np.eye(d, dtype=np.complex128)[None]
    for i in range(start, start + length):
        table = powers[i % 2]
        block = np.einsum("eij,ajk->aeik", table, block).reshape(-1, d, d)
    return block


def _distances(words: np.ndarray, target: np.ndarray, mode: str, tol: float) -> Tuple[Optional[int], float]:
    """Index and distance of the first word within tol of the target."""
    d = target.shape[0]
    if mode == "up-to-phase":
        overlap = np.einsum("ij,nij->n", target.conj(), words)
        mag = np.abs(overlap)
        lam = np.where(mag > 1e-12, overlap / np.where(mag > 1e-12, mag, 1.0), 1.0)
    else:
        lam = np.ones(len(words), dtype=np.complex128)
    diff = words - lam[:, None, None] * target[None]
    fro = np.sqrt(np.sum(np.abs(diff) ** 2, axis=(1, 2)))
    candidates = np.nonzero(fro < tol * np.sqrt(d))[0]
    if len(candidates) == 0:
        return None, float("inf")
    spectral = np.linalg.norm(diff[candidates], ord=2, axis=(1, 2))
    hits = np.nonzero(spectral < tol)[0]
    if len(hits) == 0:
        return None, float("inf")
    return int(candidates[hits[0]]), float(spectral[hits[0]])


def _search_stripe(powers: np.ndarray, target: np.ndarray, mode: str, tol: float,
                   length: int, suffix: int, worker: int, workers: int = 1) -> Optional[Tuple[Tuple[int, ...], float]]:
    """First hit of one length among patterns whose leading exponent index is worker mod workers."""
    n_exp = powers.shape[1]
    prefix_len = length - suffix
    tail = _block_products(powers, prefix_len, suffix)
    for head in range(worker, n_exp, workers):
        for rest in product(range(n_exp), repeat=prefix_len - 1):
            prefix = (head,) + rest
            m = np.eye(target.shape[0], dtype=np.complex128)
            for i, e in enumerate(prefix):
                m = powers[i % 2][e] @ m
            idx, dist = _distances(tail @ m, target, mode, tol)
            if idx is not None:
                suffix_idx = np.unravel_index(idx, (n_exp,) * suffix) if suffix else ()
                return prefix + tuple(int(x) for x in suffix_idx), dist
    return None


def weave_search(rep: BraidRep, target: GateTarget, max_len: Optional[int] = None,
                 tol: Optional[float] = None, exponents: Optional[Sequence[int]] = None,
                 workers: int = 1) -> WeaveResult:
    """
    Brute-force search for a weave sigma_{1|2}^{p_{L-1}} ... sigma_2^{p_1} sigma_1^{p_0} near target

    Patterns are visited by length, then lexicographically by exponent position in
    the configured exponent order. The first pattern within tol wins.

    Args:
        rep: Braid representation with at least two generators
        target: Gate to approximate
        max_len: Longest pattern tried
        tol: Strict phase-distance threshold
        exponents: Allowed nonzero exponents per factor
        workers: Processes sharing each length, split by leading exponent

    Returns:
        WeaveResult, with found False on a miss
    """
    max_len = max_len or config.WEAVE_MAX_LEN
    tol = config.WEAVE_TOLERANCE if tol is None else tol
    exponents = list(exponents or config.WEAVE_EXPONENTS)
    if max_len < 1:
        raise DomainError(f"max_len must be at least 1, got {max_len}")
    if rep.dimension != target.dimension:
        raise DomainError(f"rep has dimension {rep.dimension}, target {target.dimension}")
    if len(rep.generators) < 2:
        raise DomainError("weave search needs at least two generators")
    if any(e == 0 for e in exponents):
        raise DomainError("weave exponents must be nonzero")

    gens = [linalg.to_numpy(rep.sigma(1)), linalg.to_numpy(rep.sigma(2))]
    powers = np.array([[np.linalg.matrix_power(g, e) for e in exponents] for g in gens])
    pool = WorkerPool(workers)
    searched = 0
    for length in range(1, max_len + 1):
        suffix = min(length - 1, 5)
        job = partial(_search_stripe, powers, target.matrix, target.mode, tol, length, suffix,
                      workers=pool.workers)
        hits = [h for h in pool.stripe_map(job) if h is not None]
        searched += len(exponents) ** length
        if hits:
            indices, dist = min(hits, key=lambda h: h[0])
            pattern = [exponents[i] for i in indices]
            word = pattern_to_word(pattern)
            matrix = linalg.to_numpy(word_matrix(rep, word))
            logger.info(f"Weave of length {length} found at distance {dist:.3e}: {pattern}")
            return WeaveResult(True, pattern, word, dist, matrix, searched)
        logger.debug(f"No weave of length {length} within {tol}")
    logger.info(f"No weave up to length {max_len} within {tol}")
    return WeaveResult(False, searched=searched)
