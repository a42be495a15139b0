"""Compiled batch kernels for AUC and xi over label permutations and subsamples.

``sub_order`` is an ``(l, m)`` array whose row ``j`` lists the observation
indices of subsample ``j`` in increasing order of their value.  Labels read
along a row therefore give the label sequence of that subsample in sorted
order, from which both kernels follow in one pass.  Degenerate rows (one
group empty) contribute 0.5 for AUC and 0 for xi.
"""

import numpy as np
from numba import njit

AUC = 0
XI = 1

KERNELS = {"auc": AUC, "xi": XI}


@njit(cache=True, nogil=True)
def _row_value(labels, b, sub_order, j, kernel):
    m = sub_order.shape[1]
    n1 = 0
    tau = 0
    rank_sum0 = 0
    prev = labels[b, sub_order[j, 0]]
    for k in range(m):
        x = labels[b, sub_order[j, k]]
        n1 += x
        if x != prev:
            tau += 1
        if x == 0:
            rank_sum0 += k + 1
        prev = x
    n0 = m - n1
    if n0 == 0 or n1 == 0:
        return 0.5 if kernel == AUC else 0.0
    if kernel == AUC:
        u = rank_sum0 - n0 * (n0 + 1) // 2
        return u / (n0 * n1)
    return 1.0 - (m * tau) / (2.0 * n0 * n1)


@njit(cache=True, nogil=True)
def subsample_means(labels, sub_order, kernel):
    """Mean kernel value over the rows of ``sub_order`` for each label vector.

    Parameters
    ----------
    labels : int8 array, shape (B, n)
    sub_order : int64 array, shape (l, m)
    kernel : int
        ``AUC`` or ``XI``.

    Returns
    -------
    float64 array, shape (B,)
        When every row gives the same value that value is returned exactly,
        otherwise the left-to-right sum divided by ``l``.
    """
    n_batch = labels.shape[0]
    n_rows = sub_order.shape[0]
    out = np.empty(n_batch)
    for b in range(n_batch):
        first = _row_value(labels, b, sub_order, 0, kernel)
        acc = first
        same = True
        for j in range(1, n_rows):
            v = _row_value(labels, b, sub_order, j, kernel)
            acc += v
            if v != first:
                same = False
        out[b] = first if same else acc / n_rows
    return out


@njit(cache=True, nogil=True)
def subsample_values(labels, sub_order, kernel):
    """Kernel value of every subsample for a single label vector of shape (1, n)."""
    n_rows = sub_order.shape[0]
    out = np.empty(n_rows)
    for j in range(n_rows):
        out[j] = _row_value(labels, 0, sub_order, j, kernel)
    return out


def sort_rows_by_rank(indices, ranks):
    """Reorder each row of ``indices`` by increasing ``ranks`` of its entries."""
    keys = ranks[indices]
    pos = np.argsort(keys, axis=1, kind="stable")
    return np.ascontiguousarray(np.take_along_axis(indices, pos, axis=1))
