"""
Solve Pipeline
Orchestrates catalog lookup, solving, persistence, braid construction and gate experiments
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import pandas as pd

import config
from core.errors import DomainError
from modules import catalog
from modules.braidrep import BraidRep, build_rep, check_braid_relations, export_rep, reorder_basis, unitarity_defect
from modules.catalog import FusionRingData
from modules.cyclo import root_of_unity
from modules.eqgen import gen_pentagon
from modules.fsolve import FSymbolTable, solve, verify
from modules.gatelab import GateTarget, group_closure, weave_search
from services.fsymbol_store import FSymbolStore
from utils.file_io import dump_system
from utils.validators import RunConfig

logger = logging.getLogger(__name__)

PHASE_UNITS = ("half-turns", "turns")


class SolvePipeline:
    """Handles the complete ring-to-gate workflow behind every command"""

    def __init__(self, store: Optional[FSymbolStore] = None):
        self.store = store or FSymbolStore()

    def list_rings(self) -> pd.DataFrame:
        """One row per catalog ring: labels, rank, unknown count and field."""
        rows = []
        for name in catalog.builtin_names():
            ring = catalog.builtin(name)
            sextuples, _ = catalog.index_sextuples(ring)
            rows.append({
                "name": ring.name,
                "rank": ring.rank,
                "labels": " ".join(ring.names),
                "sextuples": len(sextuples),
                "field": f"Q(zeta_{ring.cyclo_order})",
            })
        return pd.DataFrame(rows, columns=["name", "rank", "labels", "sextuples", "field"])

    def solve(self, cfg: RunConfig, check: bool = False) -> Dict[str, Any]:
        """
        Solve a ring and persist its F-symbols

        With check set and an existing output file, the stored table is
        re-verified instead of solved again.
        """
        ring = catalog.resolve_ring(cfg.ring)
        output = Path(cfg.output) if cfg.output else self.store.path_for(ring)
        if check and output.exists():
            table = self.store.load(ring, output)
            report = verify(table)
            logger.info(f"Re-verified {output}")
            return {"success": report.passed, "ring": ring.name, "output": str(output),
                    "solved": False, "verification": report.to_dict()}

        table, summary = solve(
            ring,
            workers=cfg.workers,
            max_component_size=cfg.max_component_size,
            enumerate_signs=cfg.enumerate_signs or None,
            check=check,
        )
        saved = self.store.save(table, output, summary)
        result = {"success": True, "ring": ring.name, "output": str(saved), "solved": True,
                  "summary": summary.to_dict()}
        if check:
            result["success"] = bool(summary.verified)
        return result

    def dump_pentagons(self, cfg: RunConfig, path: Path) -> Path:
        """Write the generated pentagon system, one polynomial per line."""
        ring = catalog.resolve_ring(cfg.ring)
        system = gen_pentagon(ring, workers=cfg.workers)
        saved = dump_system(system.to_lines(), path)
        logger.info(f"Wrote {len(system)} pentagon relations to {saved}")
        return saved

    def verify(self, ring_ref: str, path: Optional[Path] = None, numeric: bool = False,
               precision_bits: Optional[int] = None) -> Dict[str, Any]:
        ring = catalog.resolve_ring(ring_ref)
        table = self.store.load(ring, path)
        report = verify(table, numeric=numeric, precision_bits=precision_bits)
        return {"success": report.passed, "verification": report.to_dict()}

    def table_for(self, cfg: RunConfig) -> Tuple[FusionRingData, FSymbolTable]:
        ring = catalog.resolve_ring(cfg.ring)
        table, _ = self.store.get_or_solve(ring, workers=cfg.workers, max_component_size=cfg.max_component_size)
        return ring, table

    def braid(self, cfg: RunConfig, order: Optional[Sequence[int]] = None) -> BraidRep:
        _, table = self.table_for(cfg)
        rep = build_rep(table, cfg.anyon, cfg.root, cfg.strands)
        if order is not None:
            rep = reorder_basis(rep, order)
        return rep

    def braid_report(self, rep: BraidRep, precision_bits: int) -> Dict[str, Any]:
        result = export_rep(rep, "json", precision_bits)
        result["success"] = True
        result["basis_line"] = rep.basis_line()
        result["braid_relation_failures"] = [list(f) for f in check_braid_relations(rep.generators)]
        result["unitarity_defect"] = unitarity_defect(rep, precision_bits)
        result["unitary"] = result["unitarity_defect"] < config.UNITARITY_TOLERANCE
        return result

    def gate_order(self, cfg: RunConfig, phase: Optional[Fraction] = None,
                   cap: Optional[int] = None, units: str = "half-turns") -> Dict[str, Any]:
        """
        Order of the image of B_m, optionally modulo sigma_j -> sigma_j / gamma

        gamma is exp(pi i phase) in half turns and exp(2 pi i phase) in full turns.
        """
        if units not in PHASE_UNITS:
            raise DomainError(f"unknown phase units {units!r}, expected one of {PHASE_UNITS}")
        rep = self.braid(cfg)
        scalar = None
        if phase is not None:
            turns = phase / 2 if units == "half-turns" else phase
            scalar = root_of_unity(rep.ring.cyclo_order, turns)
        closure = group_closure(rep.generators, phase=scalar, cap=cap)
        result = closure.to_dict()
        result.update({"success": True, "ring": rep.ring.name, "dimension": rep.dimension,
                       "phase": str(phase) if phase is not None else None, "phase_units": units})
        return result

    def gate_weave(self, cfg: RunConfig, target: GateTarget) -> Dict[str, Any]:
        rep = self.braid(cfg)
        found = weave_search(rep, target, max_len=cfg.max_len, tol=cfg.tol, workers=cfg.workers)
        result = found.to_dict()
        result.update({"success": found.found, "ring": rep.ring.name, "target": target.name,
                       "max_len": cfg.max_len, "tol": cfg.tol})
        return result
