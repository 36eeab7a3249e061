"""Pure-numpy column reduction kernel.

Fallback path for environments without numba; selected by setting
SPPV_DISABLE_NUMBA=1. Mirrors ``_reduce_numba.reduce_columns`` exactly.
"""

import numpy as np


def reduce_columns(entries, ptr, n_rows):
    """Left-to-right Z/2 column reduction of sparse boundary columns.

    ``entries``/``ptr`` hold the columns CSC-style: column j's rows are
    ``entries[ptr[j]:ptr[j+1]]``, sorted ascending. Rows are filtration
    positions; columns must be supplied in filtration order.

    Returns (creator_rows, destroyer_cols, zero_flags): one (row, col)
    pivot per surviving column, and a flag per column that reduced to
    zero (a cycle creator).
    """
    entries = np.asarray(entries, dtype=np.int32)
    ptr = np.asarray(ptr, dtype=np.int32)
    m = ptr.size - 1
    pivot_owner = np.full(n_rows, -1, dtype=np.int32)
    stored: list[np.ndarray | None] = [None] * m
    creators = np.empty(m, dtype=np.int32)
    destroyers = np.empty(m, dtype=np.int32)
    n_pairs = 0
    zero = np.zeros(m, dtype=np.uint8)
    for j in range(m):
        col = entries[ptr[j]:ptr[j + 1]]
        while col.size > 0:
            low = col[-1]
            owner = pivot_owner[low]
            if owner < 0:
                pivot_owner[low] = j
                stored[j] = col
                creators[n_pairs] = low
                destroyers[n_pairs] = j
                n_pairs += 1
                break
            col = np.setxor1d(col, stored[owner], assume_unique=True)
        if col.size == 0:
            zero[j] = 1
    return creators[:n_pairs].copy(), destroyers[:n_pairs].copy(), zero


def warmup() -> None:
    """No-op; present for interface parity with the numba kernel."""
