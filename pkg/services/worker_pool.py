"""
Worker Pool Service
Runs striped and chunked jobs over a fixed number of processes
"""

import logging
import multiprocessing as mp
from typing import Callable, List, Optional, Sequence, TypeVar

import config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def _apply_chunk(fn: Callable[[T], R], chunk: Sequence[T]) -> List[R]:
    return [fn(item) for item in chunk]


class WorkerPool:
    """
    Fixed-size pool for the solver's data-parallel steps

    With a single worker every job runs inline in the calling process, which keeps
    results identical to the parallel path and makes debugging straightforward.
    Results are always merged back in input order.
    """

    def __init__(self, workers: Optional[int] = None):
        requested = config.WORKERS if workers is None or workers == -1 else workers
        self.workers = max(1, int(requested))

    def chunk_size(self, n_items: int) -> int:
        """floor(len / W^2) + 1 items per chunk."""
        return n_items // (self.workers * self.workers) + 1

    def stripe_map(self, job: Callable[[int], List[R]]) -> List[List[R]]:
        """
        Run job(worker_id) for every worker id

        Args:
            job: Picklable callable taking the worker id

        Returns:
            One result per worker, in worker-id order
        """
        if self.workers == 1:
            return [job(0)]
        logger.debug(f"Dispatching {self.workers} stripes")
        with mp.get_context("spawn").Pool(self.workers) as pool:
            return pool.map(job, range(self.workers))

    def chunked_map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """
        Apply fn to every item, chunking the input across workers

        Args:
            fn: Picklable callable
            items: Inputs

        Returns:
            fn(item) for each item, in input order
        """
        items = list(items)
        if self.workers == 1 or len(items) < 2:
            return [fn(item) for item in items]
        size = self.chunk_size(len(items))
        chunks = [items[i:i + size] for i in range(0, len(items), size)]
        logger.debug(f"Dispatching {len(items)} items in {len(chunks)} chunks of {size}")
        with mp.get_context("spawn").Pool(self.workers) as pool:
            results = pool.starmap(_apply_chunk, [(fn, chunk) for chunk in chunks])
        return [r for chunk in results for r in chunk]
