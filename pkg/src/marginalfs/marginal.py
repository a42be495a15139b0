"""Label-permutation statistics bound to one feature's ranking.

:class:`MarginalStatistic` is the object handed to the permutation machinery.
Calling it on a :class:`~marginalfs.rankstats.LabeledSample` returns the
statistic; :meth:`MarginalStatistic.bind` fixes the value ranking once and
returns a function evaluating the statistic for a whole batch of label
vectors, which is what makes permutation p-values cheap.
"""

import numpy as np

from . import _kernels
from ._validation import check_choice
from .exact import u_exact_pvalue, xi_exact_pvalue
from .exceptions import DegenerateGroupError
from .rankstats import group_counts, rank_values
from .streams import StreamKey, make_stream, stream_id

CENTERS = {"auc": 0.5, "xi": 0.0}
DEFAULT_ALTERNATIVE = {"auc": "two-sided", "xi": "greater"}


class BoundStatistic:
    """Statistic evaluator with the ranking of the values fixed.

    Call with an int8 array of shape ``(B, n)``; returns ``B`` statistics.
    """

    def __init__(self, kernel, sub_order):
        self.kernel = kernel
        self.sub_order = sub_order
        self._code = _kernels.KERNELS[kernel]

    def __call__(self, labels):
        labels = np.ascontiguousarray(labels, dtype=np.int8)
        if labels.ndim == 1:
            labels = labels[None, :]
        return _kernels.subsample_means(labels, self.sub_order, self._code)


class MarginalStatistic:
    """AUC or xi, either plain or averaged over a shared subsample design.

    Parameters
    ----------
    kernel : {"auc", "xi"}
    design : SubsampleDesign, optional
        If given, the statistic is the subsample average.
    tie_key : StreamKey, optional
        Stream used to break ties in the values.  The same key always yields
        the same tie-breaks for the same values.
    """

    def __init__(self, kernel="xi", design=None, tie_key=None):
        self.kernel = check_choice(kernel, "kernel", _kernels.KERNELS)
        self.design = design
        self.tie_key = tie_key if tie_key is not None else StreamKey(0, stream_id("ties"))

    def __repr__(self):
        kind = "resampled" if self.design is not None else "plain"
        return f"MarginalStatistic({self.kernel!r}, {kind})"

    @property
    def center(self):
        return CENTERS[self.kernel]

    @property
    def resampled(self):
        return self.design is not None

    def rank(self, values):
        return rank_values(values, make_stream(self.tie_key))

    def bind(self, values):
        perm = self.rank(values)
        if self.design is None:
            sub_order = perm.order[None, :].copy()
        else:
            if self.design.n != perm.order.size:
                raise ValueError(
                    f"design built for n={self.design.n} but got {perm.order.size} values"
                )
            sub_order = _kernels.sort_rows_by_rank(self.design.indices, perm.ranks)
        return BoundStatistic(self.kernel, np.ascontiguousarray(sub_order, dtype=np.int64))

    def __call__(self, sample):
        if self.design is None and self.kernel == "auc":
            counts = group_counts(sample)
            if counts.degenerate:
                raise DegenerateGroupError(
                    f"AUC needs both groups (n0={counts.n0}, n1={counts.n1})"
                )
        return float(self.bind(sample.values)(sample.labels)[0])

    def exact_pvalue(self, sample, alternative=None):
        """Exact null p-value; available for plain statistics only.

        xi uses the one-sided upper tail of the jump-count law, AUC the
        Mann-Whitney U law with ``alternative`` (default two-sided).
        """
        if self.design is not None:
            raise ValueError("exact p-values exist only for plain (non-resampled) statistics")
        counts = group_counts(sample)
        if counts.degenerate:
            raise DegenerateGroupError(
                f"exact p-values need both groups (n0={counts.n0}, n1={counts.n1})"
            )
        stat = self(sample)
        if self.kernel == "xi":
            if alternative not in (None, "greater"):
                raise ValueError("the exact xi test is one-sided ('greater')")
            return xi_exact_pvalue(stat, counts.n0, counts.n1)
        alternative = alternative or DEFAULT_ALTERNATIVE["auc"]
        return u_exact_pvalue(stat * counts.n0 * counts.n1, counts.n0, counts.n1, alternative)
