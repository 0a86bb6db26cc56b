"""Worker-pool sizing and deterministic row partitioning.

HOROFILTER_THREADS caps the worker count for operations that parallelize
over independent rows (all-pairs BFS, filter application). Results must be
bit-identical for any worker count, so work is always split into contiguous
row blocks and each block is computed exactly as the serial code would.
"""

from __future__ import annotations

import os

_ENV_VAR = "HOROFILTER_THREADS"


def worker_count() -> int:
    """Number of workers to use, clamped to at least 1. Defaults to 1."""
    raw = os.environ.get(_ENV_VAR, "")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def row_blocks(n_rows: int, workers: int) -> list[tuple[int, int]]:
    """Split [0, n_rows) into at most `workers` contiguous [start, stop) blocks."""
    workers = max(1, min(workers, n_rows)) if n_rows else 1
    base, extra = divmod(n_rows, workers)
    blocks = []
    start = 0
    for i in range(workers):
        stop = start + base + (1 if i < extra else 0)
        if stop > start:
            blocks.append((start, stop))
        start = stop
    return blocks
