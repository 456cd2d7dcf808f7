"""
Error Types
Exception hierarchy shared by the solver, braid and gate layers
"""

from typing import Any, List, Sequence


class AnyonLabError(Exception):
    """Base class for all anyonlab failures"""

    exit_code = 1


class DomainError(AnyonLabError, ValueError):
    """A precondition on labels, indices or arguments was violated"""


class RingNotFoundError(DomainError):
    """Requested fusion ring is not in the catalog"""


class UnrepresentableError(DomainError):
    """Requested root of unity does not live in Q(zeta_m)"""


class DataError(AnyonLabError):
    """Catalog or F-symbol data is malformed or incomplete"""


class InconsistentSystemError(AnyonLabError):
    """The polynomial system has no solution"""

    exit_code = 2

    def __init__(self, message: str, provenance: Sequence[Any] = ()):
        super().__init__(message)
        self.provenance: List[Any] = list(provenance)


class UnsolvedError(AnyonLabError):
    """Elimination stalled with variables left undetermined"""

    exit_code = 2

    def __init__(self, message: str, variables: Sequence[int] = ()):
        super().__init__(message)
        self.variables: List[int] = list(variables)


class StorageError(AnyonLabError):
    """Reading or writing a data file failed"""

    exit_code = 3
