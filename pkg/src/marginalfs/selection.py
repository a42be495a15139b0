"""Scikit-learn compatible marginal-test feature selector.

Example
-------
>>> from marginalfs import MarginalTestSelector, generate_synthetic
>>> data = generate_synthetic(n=60, p=20, n_nonnull=3, shift=2.0, seed=1)
>>> sel = MarginalTestSelector(statistic="auc", pvalue="exact", alpha=0.15)
>>> sel.fit(data.y, data.x).get_support(indices=True)
array([0, 1, 2])
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_choice, check_feature_matrix, check_positive_int, check_probability
from .marginal import DEFAULT_ALTERNATIVE, MarginalStatistic
from .multiplicity import fdr_select
from .exceptions import FeatureComputationError
from .permutation import ALTERNATIVES, PermutationScheme, permutation_test
from .rankstats import LabeledSample
from .resampling import build_design
from .streams import StreamKey, stream_id


def ranking_score(kernel, statistic):
    """Score used to rank features: ``|AUC - 0.5|`` for AUC, xi itself for xi."""
    statistic = np.asarray(statistic, dtype=np.float64)
    return np.abs(statistic - 0.5) if kernel == "auc" else statistic


def _feature_statistic(kernel, design, seed, j):
    tie_key = StreamKey(seed, stream_id("ties", j))
    return MarginalStatistic(kernel, design=design, tie_key=tie_key)


def _map(fn, items, n_jobs):
    if n_jobs == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))


def marginal_statistics(X, y, *, statistic="xi", resample=False, m=50, n_subsamples=100,
                        random_state=0, n_jobs=1):
    """Per-feature AUC or xi (plain or subsample-averaged) of each column of ``X``.

    Returns
    -------
    stats : ndarray of shape (n_features,)
    design : SubsampleDesign or None
        The single design shared by all columns when ``resample`` is set.
    """
    X, y = check_feature_matrix(X, y)
    design = _make_design(X.shape[0], resample, m, n_subsamples, random_state)

    def one(j):
        stat = _feature_statistic(statistic, design, random_state, j)
        return float(stat.bind(X[:, j])(y)[0])

    return np.array(_map(one, range(X.shape[1]), n_jobs)), design


def _make_design(n, resample, m, n_subsamples, seed):
    if not resample:
        return None
    if m > n:
        raise ValueError(f"subsample size m={m} exceeds the number of samples n={n}")
    return build_design(n, m, n_subsamples, StreamKey(seed, stream_id("design")))


class MarginalTestSelector(SelectorMixin, BaseEstimator):
    """Select features whose marginal two-sample test survives FDR control.

    Step one computes, for every column of ``X``, AUC or Chatterjee's xi
    against the binary target together with a p-value.  Step two applies the
    Benjamini-Yekutieli (or Benjamini-Hochberg) procedure at level
    ``alpha``.  Resampled statistics average the kernel over one subsample
    design shared by every feature.

    Parameters
    ----------
    statistic : {"xi", "auc"}, default="xi"
    resample : bool, default=False
        Average over ``n_subsamples`` random subsamples of size ``m``.
    m : int, default=50
    n_subsamples : int, default=100
    n_perm : int, default=100000
        Monte Carlo permutations per feature when ``pvalue="mc"``.
    pvalue : {"mc", "exact"}, default="mc"
        ``"exact"`` is available for plain statistics only.
    alternative : {"two-sided", "greater", "less"} or None
        None means two-sided for AUC (about 0.5) and greater for xi.
    fdr : {"by", "bh"}, default="by"
    alpha : float, default=0.15
    random_state : int, default=0
        Seed for the subsample design, tie-breaks and permutations.
    n_jobs : int, default=1
        Worker threads over features.  Results do not depend on it.

    Attributes
    ----------
    statistics_ : ndarray of shape (n_features,)
    scores_ : ndarray of shape (n_features,)
        Ranking score derived from ``statistics_``.
    pvalues_ : ndarray of shape (n_features,)
    pvalues_adjusted_ : ndarray of shape (n_features,)
    selection_ : SelectionResult
    design_ : SubsampleDesign or None
    n_features_in_ : int
    """

    def __init__(self, statistic="xi", resample=False, m=50, n_subsamples=100, n_perm=100_000,
                 pvalue="mc", alternative=None, fdr="by", alpha=0.15, random_state=0, n_jobs=1):
        self.statistic = statistic
        self.resample = resample
        self.m = m
        self.n_subsamples = n_subsamples
        self.n_perm = n_perm
        self.pvalue = pvalue
        self.alternative = alternative
        self.fdr = fdr
        self.alpha = alpha
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _validate_params(self):
        check_choice(self.statistic, "statistic", {"auc", "xi"})
        check_choice(self.pvalue, "pvalue", {"mc", "exact"})
        check_choice(self.fdr, "fdr", {"by", "bh"})
        check_probability(self.alpha, "alpha")
        check_positive_int(self.n_perm, "n_perm")
        check_positive_int(self.n_jobs, "n_jobs")
        check_positive_int(self.random_state, "random_state", minimum=0)
        if self.resample:
            check_positive_int(self.m, "m")
            check_positive_int(self.n_subsamples, "n_subsamples")
            if self.pvalue == "exact":
                raise ValueError("exact p-values are only available for plain statistics")
        alt = self.alternative or DEFAULT_ALTERNATIVE[self.statistic]
        check_choice(alt, "alternative", ALTERNATIVES)
        if self.pvalue == "exact" and self.statistic == "xi" and alt != "greater":
            raise ValueError("the exact xi test is one-sided; use alternative='greater'")
        return alt

    def fit(self, X, y):
        """Compute marginal statistics and p-values and run the FDR procedure."""
        alternative = self._validate_params()
        X, y = check_feature_matrix(X, y)
        if np.all(y == 0) or np.all(y == 1):
            raise ValueError("y must contain both classes 0 and 1")
        self.n_features_in_ = X.shape[1]
        seed = int(self.random_state)
        self.design_ = _make_design(X.shape[0], self.resample, self.m, self.n_subsamples, seed)

        def one(j):
            return self._fit_feature(X[:, j], y, j, seed, alternative)

        results = _map(one, range(X.shape[1]), self.n_jobs)
        self.statistics_ = np.array([r[0] for r in results])
        self.pvalues_ = np.array([r[1] for r in results])
        self.scores_ = ranking_score(self.statistic, self.statistics_)
        self.selection_ = fdr_select(self.pvalues_, self.alpha, self.fdr)
        self.pvalues_adjusted_ = self.selection_.adjusted
        return self

    def _fit_feature(self, values, y, j, seed, alternative):
        stat = _feature_statistic(self.statistic, self.design_, seed, j)
        sample = LabeledSample(y, values)
        try:
            if self.pvalue == "exact":
                return stat(sample), stat.exact_pvalue(sample, alternative)
            scheme = PermutationScheme(self.n_perm, StreamKey(seed, stream_id("permutation", j)),
                                       alternative)
            return permutation_test(stat.bind(values), y, scheme, stat.center)
        except Exception as exc:
            raise FeatureComputationError(j, exc) from exc

    def _get_support_mask(self):
        check_is_fitted(self, "selection_")
        return self.selection_.mask
