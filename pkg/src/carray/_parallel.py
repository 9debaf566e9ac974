"""Chunked, optionally threaded evaluation over grid rows.

Chunk boundaries depend only on the data shape, never on the thread count,
so results are bit-identical however many workers run.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import InvalidArgumentError

CHUNK_ROWS = 16
ENV_THREADS = "CARRAY_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw is None or raw == "":
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise InvalidArgumentError(f"{ENV_THREADS} must be a positive integer, got {raw!r}")
    return n


def map_rows(func, rows: np.ndarray) -> np.ndarray:
    """Apply ``func`` to consecutive row blocks of ``rows`` and concatenate."""
    blocks = [rows[i:i + CHUNK_ROWS] for i in range(0, len(rows), CHUNK_ROWS)]
    workers = thread_count()
    if workers == 1 or len(blocks) == 1:
        return np.concatenate([func(b) for b in blocks])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.concatenate(list(pool.map(func, blocks)))
