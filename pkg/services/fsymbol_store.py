"""
F-Symbol Store Service
Caches solved F-symbol tables on disk, keyed by ring name and content hash
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

import config
from core.errors import DataError
from modules.catalog import FusionRingData, ring_hash
from modules.fsolve import FSymbolTable, SolveSummary, solve
from utils.file_io import load_json, save_json

logger = logging.getLogger(__name__)


class FSymbolStore:
    """
    Solve-on-demand cache of F-symbol files

    Files live under FSYMBOLS_DIR as <ring>-<hash prefix>.json so that editing a
    ring definition never serves stale F-symbols.
    """

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory or config.FSYMBOLS_DIR)

    def path_for(self, ring: FusionRingData) -> Path:
        return self.directory / f"{ring.name}-{ring_hash(ring)[:12]}.json"

    def has(self, ring: FusionRingData) -> bool:
        return self.path_for(ring).exists()

    def load(self, ring: FusionRingData, path: Optional[Path] = None) -> FSymbolTable:
        """Load a stored table; a file for a different ring is rejected."""
        path = Path(path or self.path_for(ring))
        data = load_json(path)
        if data.get("ring") != ring.name:
            raise DataError(f"{path} holds F-symbols for {data.get('ring')!r}, not {ring.name!r}")
        expected = ring_hash(ring)
        if data.get("ring_hash") not in (None, expected):
            raise DataError(f"{path} was solved for a different definition of {ring.name!r}")
        logger.info(f"Loaded F-symbols for {ring.name} from {path}")
        return FSymbolTable.from_json(ring, data)

    def save(self, table: FSymbolTable, path: Optional[Path] = None,
             summary: Optional[SolveSummary] = None) -> Path:
        data = table.to_json()
        data["ring_hash"] = ring_hash(table.ring)
        if summary is not None:
            data["summary"] = summary.to_dict()
        saved = save_json(data, path or self.path_for(table.ring))
        logger.info(f"Saved F-symbols for {table.ring.name} to {saved}")
        return saved

    def get_or_solve(self, ring: FusionRingData, workers: Optional[int] = None,
                     **solve_options) -> Tuple[FSymbolTable, Optional[SolveSummary]]:
        """
        Cached table for ring, solving and storing it first when absent

        Returns:
            (table, summary); summary is None on a cache hit
        """
        if self.has(ring):
            try:
                return self.load(ring), None
            except DataError as e:
                logger.warning(f"Ignoring unusable cache file: {e}")
        logger.info(f"No cached F-symbols for {ring.name}; solving")
        table, summary = solve(ring, workers=workers, **solve_options)
        self.save(table, summary=summary)
        return table, summary
