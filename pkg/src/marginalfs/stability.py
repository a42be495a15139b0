"""Selection stability across cross-validation folds.

For a partition of the samples into ``k`` folds, ``M_s(B_i)`` is the set of
the ``s`` top-ranked features computed on fold ``i`` alone and the stability
count ``S(M_s)`` is the size of the intersection of these sets.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_feature_matrix, check_positive_int
from .selection import marginal_statistics, ranking_score
from .streams import StreamKey, make_stream, stream_id


@dataclass(frozen=True, eq=False)
class FoldPartition:
    """Fold index (``0 .. k-1``) of every observation."""

    k: int
    assignment: np.ndarray

    def folds(self):
        return [np.flatnonzero(self.assignment == i) for i in range(self.k)]

    def sizes(self):
        return np.bincount(self.assignment, minlength=self.k)


@dataclass(frozen=True, eq=False)
class StabilityCurve:
    """``s -> S(M_s)`` together with the per-fold scores it was built from."""

    s_values: np.ndarray
    counts: np.ndarray
    fold_scores: np.ndarray = field(repr=False)
    method: str = ""


def make_folds(n, k, key):
    """Uniformly random balanced partition of ``range(n)`` into ``k`` folds.

    Fold sizes differ by at most one; the partition depends only on ``key``.
    """
    n = check_positive_int(n, "n")
    k = check_positive_int(k, "k")
    if not 2 <= k <= n:
        raise ValueError(f"number of folds must satisfy 2 <= k <= n, got k={k}, n={n}")
    base = np.arange(n) % k
    assignment = make_stream(key).permutation(base)
    return FoldPartition(k=k, assignment=assignment)


def rank_positions(scores):
    """Position of every feature in the ranking (0 = best).

    Larger scores rank first; equal scores are ordered by feature index.
    """
    scores = np.asarray(scores, dtype=np.float64)
    order = np.lexsort((np.arange(scores.size), -scores))
    pos = np.empty(scores.size, dtype=np.int64)
    pos[order] = np.arange(scores.size)
    return pos


def top_s(scores, s):
    """Indices of the ``s`` highest-scoring features (ties to the lower index)."""
    scores = np.asarray(scores, dtype=np.float64)
    s = check_positive_int(s, "s")
    if s > scores.size:
        raise ValueError(f"s={s} exceeds the number of features {scores.size}")
    return frozenset(np.flatnonzero(rank_positions(scores) < s).tolist())


def stability_count(fold_scores, s):
    """Number of features in the top ``s`` of every fold.

    Parameters
    ----------
    fold_scores : sequence of k score vectors over the same features
    s : int
    """
    rows = [np.asarray(r, dtype=np.float64) for r in fold_scores]
    if not rows:
        raise ValueError("need at least one fold")
    if len({r.size for r in rows}) != 1:
        raise ValueError("all folds must score the same set of features")
    common = top_s(rows[0], s)
    for r in rows[1:]:
        common = common & top_s(r, s)
    return len(common)


def curve_from_scores(fold_scores, s_values=None, method=""):
    """Stability curve over ``s_values`` (default ``1 .. p``).

    A feature belongs to every top-``s`` set exactly when its worst
    position across folds is below ``s``.
    """
    fold_scores = np.atleast_2d(np.asarray(fold_scores, dtype=np.float64))
    p = fold_scores.shape[1]
    if s_values is None:
        s_values = np.arange(1, p + 1)
    s_values = np.asarray(s_values, dtype=np.int64)
    if np.any(s_values < 1) or np.any(s_values > p):
        raise ValueError(f"s values must lie in 1..{p}")
    worst = np.max([rank_positions(r) for r in fold_scores], axis=0)
    counts = np.array([int(np.count_nonzero(worst < s)) for s in s_values])
    return StabilityCurve(s_values=s_values, counts=counts, fold_scores=fold_scores,
                          method=method)


def random_intersection_baseline(p, s, k):
    """Expected ``S(M_s)`` when each fold's top-``s`` set is uniformly random."""
    return p * (s / p) ** k


def stability_curve(X, y, folds, s_values=None, *, statistic="auc", resample=False, m=50,
                    n_subsamples=100, random_state=0, n_jobs=1):
    """Stability curve of a marginal ranking method.

    Each fold's statistics are computed on that fold's samples only.  For
    resampled statistics every fold gets its own design, keyed by the fold
    index.

    Parameters
    ----------
    folds : FoldPartition or int
        An int ``k`` draws a partition from ``random_state``; ``k = 1`` uses
        the whole sample as a single fold.
    """
    X, y = check_feature_matrix(X, y)
    if isinstance(folds, (int, np.integer)):
        if folds == 1:
            folds = FoldPartition(k=1, assignment=np.zeros(X.shape[0], dtype=np.int64))
        else:
            folds = make_folds(X.shape[0], int(folds),
                               StreamKey(random_state, stream_id("folds")))
    rows = []
    for i, idx in enumerate(folds.folds()):
        fold_seed = stream_id("fold-seed", random_state, i)
        stats, _ = marginal_statistics(
            X[idx], y[idx], statistic=statistic, resample=resample, m=m,
            n_subsamples=n_subsamples, random_state=fold_seed, n_jobs=n_jobs)
        rows.append(ranking_score(statistic, stats))
    method = f"{statistic}{'-resampled' if resample else ''}"
    return curve_from_scores(np.array(rows), s_values, method=method)
