"""numba-compiled column reduction kernel (the hot loop).

Same contract as ``_reduce_numpy.reduce_columns``; selected by default
when numba is importable and SPPV_DISABLE_NUMBA is unset.

The working column lives in a pair of reusable scratch buffers that are
merged ping-pong style, so a reduction chain allocates only when a
column is finally stored as a pivot.
"""

import numpy as np
from numba import njit
from numba.typed import List


@njit(cache=True, nogil=True)
def _merge_xor(a, na, b, out):
    """Symmetric difference of sorted a[:na] and sorted b into out.

    Returns the merged length; out must hold at least na + b.size.
    """
    i = j = k = 0
    nb = b.size
    while i < na and j < nb:
        if a[i] < b[j]:
            out[k] = a[i]
            i += 1
            k += 1
        elif a[i] > b[j]:
            out[k] = b[j]
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < na:
        out[k] = a[i]
        i += 1
        k += 1
    while j < nb:
        out[k] = b[j]
        j += 1
        k += 1
    return k


@njit(cache=True, nogil=True)
def _reduce_columns_impl(entries, ptr, n_rows):
    m = ptr.size - 1
    pivot_owner = np.full(n_rows, -1, np.int32)
    stored = List()
    empty = np.empty(0, np.int32)
    for _ in range(m):
        stored.append(empty)
    creators = np.empty(m, np.int32)
    destroyers = np.empty(m, np.int32)
    n_pairs = 0
    zero = np.zeros(m, np.uint8)
    buf = np.empty(64, np.int32)
    tmp = np.empty(64, np.int32)
    for j in range(m):
        lo, hi = ptr[j], ptr[j + 1]
        k = hi - lo
        if k > buf.size:
            buf = np.empty(2 * k, np.int32)
        for t in range(k):
            buf[t] = entries[lo + t]
        while k > 0:
            low = buf[k - 1]
            owner = pivot_owner[low]
            if owner < 0:
                pivot_owner[low] = j
                stored[j] = buf[:k].copy()
                creators[n_pairs] = low
                destroyers[n_pairs] = j
                n_pairs += 1
                break
            other = stored[owner]
            need = k + other.size
            if tmp.size < need:
                tmp = np.empty(2 * need, np.int32)
            k = _merge_xor(buf, k, other, tmp)
            buf, tmp = tmp, buf
        if k == 0:
            zero[j] = 1
    return creators[:n_pairs].copy(), destroyers[:n_pairs].copy(), zero


def reduce_columns(entries, ptr, n_rows):
    return _reduce_columns_impl(
        np.ascontiguousarray(entries, dtype=np.int32),
        np.ascontiguousarray(ptr, dtype=np.int64),
        n_rows,
    )


def warmup() -> None:
    """Trigger JIT compilation (or cache load) on a toy input."""
    reduce_columns(np.array([0, 1], np.int32), np.array([0, 2], np.int32), 2)
