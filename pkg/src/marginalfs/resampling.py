"""Subsampled U-statistic versions of AUC and xi.

A :class:`SubsampleDesign` holds ``l`` index sets of size ``m`` drawn
uniformly without replacement.  The same design is meant to be shared by
every feature of a data set, so all marginal statistics are averaged over
the same subsamples and the random numbers are generated only once.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations, islice

import numpy as np

from . import _kernels
from ._validation import check_choice, check_positive_int
from .exceptions import BudgetExceededError
from .rankstats import rank_values
from .streams import StreamKey, make_stream, stream_id, uniform_subsets

DEFAULT_M = 50
DEFAULT_N_SUBSAMPLES = 100
MAX_EXHAUSTIVE_SUBSETS = 10**6

_DEFAULT_TIE_KEY = StreamKey(0, stream_id("ties"))


@dataclass(frozen=True, eq=False)
class SubsampleDesign:
    """Shared ``(l, m)`` design of sorted index sets into ``range(n)``."""

    n: int
    m: int
    n_subsamples: int
    key: StreamKey = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @property
    def complete(self):
        """True when every subsample is the full sample (``m == n``)."""
        return self.m == self.n


def build_design(n, m, n_subsamples, key):
    """Draw ``n_subsamples`` independent uniform ``m``-subsets of ``range(n)``.

    The design is a pure function of its arguments.
    """
    n = check_positive_int(n, "n")
    m = check_positive_int(m, "m")
    n_subsamples = check_positive_int(n_subsamples, "n_subsamples")
    if m > n:
        raise ValueError(f"subsample size m={m} exceeds sample size n={n}")
    indices = uniform_subsets(make_stream(key), n, m, n_subsamples)
    indices.flags.writeable = False
    return SubsampleDesign(n=n, m=m, n_subsamples=n_subsamples, key=key, indices=indices)


def _ranks(sample, tie_stream):
    if tie_stream is None:
        tie_stream = make_stream(_DEFAULT_TIE_KEY)
    return rank_values(sample.values, tie_stream)


def _check_design(sample, design):
    if design.n != sample.n:
        raise ValueError(f"design built for n={design.n} but the sample has n={sample.n}")


def _resampled(sample, design, kernel, tie_stream):
    _check_design(sample, design)
    perm = _ranks(sample, tie_stream)
    sub_order = _kernels.sort_rows_by_rank(design.indices, perm.ranks)
    labels = np.ascontiguousarray(sample.labels[None, :])
    return float(_kernels.subsample_means(labels, sub_order, _kernels.KERNELS[kernel])[0])


def resampled_auc(sample, design, tie_stream=None):
    """Average AUC over the subsamples of ``design``.

    Subsamples containing a single group contribute 0.5.
    """
    return _resampled(sample, design, "auc", tie_stream)


def resampled_xi(sample, design, tie_stream=None):
    """Average xi over the subsamples of ``design``; single-group subsamples contribute 0."""
    return _resampled(sample, design, "xi", tie_stream)


def exhaustive_u_statistic(sample, m, kernel, *, max_subsets=MAX_EXHAUSTIVE_SUBSETS,
                           tie_stream=None, chunk_size=65536):
    """Average ``kernel`` over all ``C(n, m)`` subsets, in lexicographic order.

    Raises
    ------
    BudgetExceededError
        If ``C(n, m)`` exceeds ``max_subsets``.
    """
    check_choice(kernel, "kernel", _kernels.KERNELS)
    m = check_positive_int(m, "m")
    n = sample.n
    if m > n:
        raise ValueError(f"subsample size m={m} exceeds sample size n={n}")
    total = math.comb(n, m)
    if total > max_subsets:
        raise BudgetExceededError(f"C({n}, {m}) = {total} subsets exceeds the budget {max_subsets}")
    perm = _ranks(sample, tie_stream)
    labels = np.ascontiguousarray(sample.labels[None, :])
    code = _kernels.KERNELS[kernel]
    combos = combinations(range(n), m)
    acc = 0.0
    first = None
    same = True
    while True:
        chunk = list(islice(combos, chunk_size))
        if not chunk:
            break
        idx = np.array(chunk, dtype=np.int64)
        sub_order = _kernels.sort_rows_by_rank(idx, perm.ranks)
        for v in _kernels.subsample_values(labels, sub_order, code).tolist():
            if first is None:
                first = v
                acc = v
                continue
            acc += v
            if v != first:
                same = False
    return first if same else acc / total


def bootstrap_xi_with_replacement(sample, n_draws, key, tie_stream=None):
    """Average xi over ``n_draws`` ordinary (with replacement) bootstrap resamples.

    Duplicated observations share their label and sit next to each other in
    the sorted order, so they never produce a jump.  This biases xi upwards
    even under independence; the function exists to show that bias.
    """
    n_draws = check_positive_int(n_draws, "n_draws")
    n = sample.n
    if n < 2:
        raise ValueError("bootstrap needs at least two observations")
    perm = _ranks(sample, tie_stream)
    draws = make_stream(key).integers(0, n, size=(n_draws, n))
    sub_order = _kernels.sort_rows_by_rank(draws, perm.ranks)
    labels = np.ascontiguousarray(sample.labels[None, :])
    return float(_kernels.subsample_means(labels, sub_order, _kernels.XI)[0])
