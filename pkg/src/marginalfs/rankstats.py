"""Rank-based two-sample statistics for a single feature.

These are the reference (pure Python / numpy) implementations of the
Mann-Whitney U statistic, the AUC and Chatterjee's xi specialised to binary
labels.  The batched kernels used for resampling and permutation testing
live in :mod:`marginalfs._kernels` and are checked against these.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_labels, check_values
from .exceptions import DegenerateGroupError


@dataclass(frozen=True, eq=False)
class LabeledSample:
    """Binary group labels paired with real values for one feature.

    Parameters
    ----------
    labels : array-like of {0, 1}, shape (n,)
    values : array-like of float, shape (n,)
    """

    labels: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        labels = check_labels(self.labels)
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError(f"values must be one-dimensional, got shape {values.shape}")
        if labels.shape != values.shape:
            raise ValueError(
                f"labels and values differ in length ({labels.size} vs {values.size})"
            )
        if labels.size == 0:
            raise ValueError("a LabeledSample needs at least one observation")
        labels.flags.writeable = False
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return self.labels.size

    def subsample(self, indices):
        indices = np.asarray(indices)
        return LabeledSample(self.labels[indices], self.values[indices])


@dataclass(frozen=True)
class GroupCounts:
    n0: int
    n1: int

    @property
    def n(self):
        return self.n0 + self.n1

    @property
    def degenerate(self):
        return self.n0 == 0 or self.n1 == 0


@dataclass(frozen=True, eq=False)
class RankPermutation:
    """Sorting permutation of a value vector and its inverse.

    Attributes
    ----------
    order : ndarray of int64
        0-based indices such that ``values[order]`` is non-decreasing.
    ranks : ndarray of int64
        1-based rank of each observation, ``ranks[order[i]] == i + 1``.
    tie_break_log : tuple of tuples
        For every group of exactly tied values, the observation indices in
        the (random) order that was assigned to them.
    """

    order: np.ndarray
    ranks: np.ndarray
    tie_break_log: tuple = ()


def group_counts(sample):
    n1 = int(np.count_nonzero(sample.labels))
    return GroupCounts(n0=sample.n - n1, n1=n1)


def rank_values(values, tie_stream=None):
    """Rank ``values`` ascending, breaking exact ties uniformly at random.

    Parameters
    ----------
    values : array-like of float
        Finite reals, at least one.
    tie_stream : numpy.random.Generator, optional
        Source of randomness for tie-breaks.  Required only if ``values``
        contains ties.

    Returns
    -------
    RankPermutation
    """
    values = check_values(values)
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    log = []
    if values.size > 1:
        boundaries = np.flatnonzero(np.diff(sorted_vals) != 0) + 1
        starts = np.concatenate(([0], boundaries))
        stops = np.concatenate((boundaries, [values.size]))
        tied = np.flatnonzero(stops - starts > 1)
        if tied.size and tie_stream is None:
            raise ValueError("values contain ties; a tie_stream is required to break them")
        for t in tied:
            lo, hi = starts[t], stops[t]
            block = order[lo:hi]
            order[lo:hi] = block[tie_stream.permutation(hi - lo)]
            log.append(tuple(int(i) for i in order[lo:hi]))
    ranks = np.empty_like(order)
    ranks[order] = np.arange(1, values.size + 1)
    return RankPermutation(order=order, ranks=ranks, tie_break_log=tuple(log))


def _require_both_groups(counts):
    if counts.degenerate:
        raise DegenerateGroupError(
            f"both groups must be non-empty (n0={counts.n0}, n1={counts.n1})"
        )


def mann_whitney_u(sample, perm):
    """Mann-Whitney U: group-0 rank sum minus ``n0 (n0 + 1) / 2``.

    Counts the pairs (group-0 value, group-1 value) in which the group-0
    value is the larger one, so the result lies in ``[0, n0 * n1]``.
    """
    counts = group_counts(sample)
    _require_both_groups(counts)
    rank_sum = int(perm.ranks[sample.labels == 0].sum())
    return float(rank_sum - counts.n0 * (counts.n0 + 1) // 2)


def auc(sample, perm):
    """U rescaled to ``[0, 1]``; 0.5 is the null mean."""
    counts = group_counts(sample)
    _require_both_groups(counts)
    rank_sum = int(perm.ranks[sample.labels == 0].sum())
    u = rank_sum - counts.n0 * (counts.n0 + 1) // 2
    return u / (counts.n0 * counts.n1)


def jump_count(x):
    """Number of adjacent positions at which a binary sequence changes value."""
    x = np.asarray(x)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("jump_count expects a non-empty 1-d sequence")
    return int(np.count_nonzero(x[1:] != x[:-1]))


def xi_binary(sample, perm):
    """Chatterjee's xi for binary labels.

    Equal to ``1 - n * tau / (2 * n0 * n1)`` where ``tau`` is the jump count
    of the labels read in increasing order of the values.  Defined as 0 when
    one group is empty.
    """
    counts = group_counts(sample)
    if counts.degenerate:
        return 0.0
    tau = jump_count(sample.labels[perm.order])
    return 1.0 - (counts.n * tau) / (2 * counts.n0 * counts.n1)
