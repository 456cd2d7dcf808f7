"""
Input Validation Utilities
Handles validation of command options and run configurations
"""

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import config
from core.errors import DomainError


def parse_rational(text: str) -> Fraction:
    """
    Parse "1/24", "0.125" or "3" into an exact fraction

    Args:
        text: Rational in fraction or decimal notation

    Returns:
        The value as a Fraction
    """
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"{text!r} is not a rational number")


def validate_workers(workers: Optional[int]) -> int:
    """-1 or None selects all cores; anything else must be at least 1."""
    if workers is None or workers == -1:
        return config.WORKERS
    if workers < 1:
        raise DomainError(f"workers must be at least 1, got {workers}")
    return workers


def validate_strands(strands: int) -> int:
    if strands < 3:
        raise DomainError(f"braid commands need at least 3 strands, got {strands}")
    return strands


def validate_tolerance(tol: float) -> float:
    if not tol > 0:
        raise DomainError(f"search tolerance must be positive, got {tol}")
    return tol


@dataclass
class RunConfig:
    """Everything one command invocation needs"""

    command: str
    ring: str = ""
    workers: Optional[int] = 1
    max_component_size: int = field(default_factory=lambda: config.MAX_COMPONENT_SIZE)
    enumerate_signs: bool = False
    anyon: Optional[str] = None
    root: Optional[str] = None
    strands: Optional[int] = None
    target: Optional[str] = None
    max_len: int = field(default_factory=lambda: config.WEAVE_MAX_LEN)
    tol: float = field(default_factory=lambda: config.WEAVE_TOLERANCE)
    output: Optional[Path] = None
    precision_bits: int = field(default_factory=lambda: config.PRECISION_BITS)

    def validate(self) -> "RunConfig":
        self.workers = validate_workers(self.workers)
        if self.max_component_size < 1:
            raise DomainError(f"max component size must be at least 1, got {self.max_component_size}")
        if self.strands is not None:
            validate_strands(self.strands)
        if self.command == "gate weave":
            validate_tolerance(self.tol)
            if self.max_len < 1:
                raise DomainError(f"max length must be at least 1, got {self.max_len}")
        if self.precision_bits < 53:
            raise DomainError(f"precision must be at least 53 bits, got {self.precision_bits}")
        return self

    def to_dict(self) -> dict:
        data = asdict(self)
        data["output"] = str(self.output) if self.output else None
        return data
