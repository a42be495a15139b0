"""Monte Carlo permutation p-values.

The estimator is ``(b + 1) / (n_perm + 1)`` where ``b`` counts random label
permutations whose statistic is at least as extreme as the observed one.
Counting the observed labelling itself keeps the p-value valid.  When
``n!`` is at most 5040 every permutation is enumerated and the exact
fraction ``b / n!`` is returned instead.
"""

import math
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from ._validation import check_choice, check_positive_int
from .rankstats import LabeledSample
from .streams import StreamKey, make_stream

ALTERNATIVES = frozenset({"two-sided", "greater", "less"})
EXHAUSTIVE_LIMIT = 5040
# Relative slack when comparing floating-point statistics; ties count as extreme.
TIE_TOL = 1e-12
_BATCH_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class PermutationScheme:
    """How to draw label permutations.

    Parameters
    ----------
    n_perm : int
        Number of random permutations.
    key : StreamKey
        Stream the permutations are drawn from.
    alternative : {"greater", "less", "two-sided"}
    exhaustive : bool, optional
        Force (True) or forbid (False) full enumeration.  By default the
        permutations are enumerated when ``n! <= 5040``.
    """

    n_perm: int = 9999
    key: StreamKey = field(default_factory=lambda: StreamKey(0))
    alternative: str = "greater"
    exhaustive: bool | None = None

    def __post_init__(self):
        check_positive_int(self.n_perm, "n_perm")
        check_choice(self.alternative, "alternative", ALTERNATIVES)

    def use_exhaustive(self, n):
        if self.exhaustive is not None:
            return self.exhaustive
        return n <= 7 and math.factorial(n) <= EXHAUSTIVE_LIMIT


def _extreme_mask(stats, observed, alternative, center):
    if alternative == "greater":
        return stats >= observed - TIE_TOL * max(1.0, abs(observed))
    if alternative == "less":
        return stats <= observed + TIE_TOL * max(1.0, abs(observed))
    dev = abs(observed - center)
    return np.abs(stats - center) >= dev - TIE_TOL * max(1.0, dev)


def _batched_evaluator(statistic, sample):
    bind = getattr(statistic, "bind", None)
    if bind is not None:
        return bind(sample.values)
    values = sample.values

    def evaluate(labels):
        return np.array([statistic(LabeledSample(row, values)) for row in labels])

    return evaluate


def permutation_pvalue(statistic, sample, scheme, center=None):
    """Permutation p-value of ``statistic`` on ``sample``.

    Parameters
    ----------
    statistic : callable
        Maps a ``LabeledSample`` to a real number.  Objects with a ``bind``
        method (such as ``MarginalStatistic``) are evaluated in batches.
    sample : LabeledSample
    scheme : PermutationScheme
    center : float, optional
        Null center for two-sided tests; defaults to ``statistic.center`` if
        present, else 0.

    Returns
    -------
    float
        In ``(0, 1]``.
    """
    if center is None:
        center = getattr(statistic, "center", 0.0)
    evaluate = _batched_evaluator(statistic, sample)
    return permutation_test(evaluate, sample.labels, scheme, center)[1]


def permutation_test(evaluate, labels, scheme, center=0.0):
    """Observed statistic and permutation p-value for a batched evaluator.

    ``evaluate`` maps an int8 array of shape ``(B, n)`` of label vectors to
    ``B`` statistics.
    """
    labels = np.asarray(labels, dtype=np.int8)
    observed = float(evaluate(labels[None, :])[0])
    n = labels.size

    if scheme.use_exhaustive(n):
        total = math.factorial(n)
        if total > EXHAUSTIVE_LIMIT:
            raise ValueError(f"exhaustive enumeration of {n}! permutations is not supported")
        perms = np.array(list(permutations(range(n))), dtype=np.int64)
        stats = evaluate(labels[perms])
        b = int(np.count_nonzero(_extreme_mask(stats, observed, scheme.alternative, center)))
        return observed, b / total

    stream = make_stream(scheme.key)
    batch = max(1, min(scheme.n_perm, _BATCH_ELEMENTS // max(n, 1)))
    b = 0
    done = 0
    while done < scheme.n_perm:
        size = min(batch, scheme.n_perm - done)
        shuffled = stream.permuted(np.broadcast_to(labels, (size, n)), axis=1)
        stats = evaluate(shuffled)
        b += int(np.count_nonzero(_extreme_mask(stats, observed, scheme.alternative, center)))
        done += size
    return observed, (b + 1) / (scheme.n_perm + 1)


@dataclass(frozen=True, eq=False)
class UniformityDiagnostic:
    """P-values of a test across simulated null data sets.

    Attributes
    ----------
    pvalues : ndarray
    max_deviation : float
        ``sup_t (F_n(t) - t)``, the largest excess of the empirical CDF over
        the uniform CDF; positive values indicate anti-conservativeness.
    rejection_rates : dict
        ``alpha -> P(p <= alpha)`` for the requested levels.
    """

    pvalues: np.ndarray
    max_deviation: float
    rejection_rates: dict

    def bound(self, alpha, n_se=3.0):
        """``alpha + n_se`` binomial standard errors for the number of data sets."""
        return alpha + n_se * math.sqrt(alpha * (1 - alpha) / self.pvalues.size)


def pvalue_uniformity_diagnostic(statistic, null_generator, scheme, n_datasets, *,
                                 mode="mc", alphas=(0.01, 0.05, 0.1)):
    """Simulate p-values of ``statistic`` over ``n_datasets`` null data sets.

    Parameters
    ----------
    null_generator : callable
        ``null_generator(stream) -> LabeledSample`` producing data under the
        null; data set ``i`` receives the stream ``scheme.key.child("null-data", i)``.
    mode : {"mc", "exact"}
        ``"exact"`` calls ``statistic.exact_pvalue(sample)`` instead of
        permuting.
    """
    check_choice(mode, "mode", {"mc", "exact"})
    n_datasets = check_positive_int(n_datasets, "n_datasets")
    pvals = np.empty(n_datasets)
    for i in range(n_datasets):
        sample = null_generator(make_stream(scheme.key.child("null-data", i)))
        if mode == "exact":
            pvals[i] = statistic.exact_pvalue(sample)
        else:
            sub = PermutationScheme(scheme.n_perm, scheme.key.child("permutation", i),
                                    scheme.alternative, scheme.exhaustive)
            pvals[i] = permutation_pvalue(statistic, sample, sub)
    srt = np.sort(pvals)
    ecdf = np.arange(1, n_datasets + 1) / n_datasets
    max_dev = float(np.max(ecdf - srt))
    rates = {a: float(np.mean(pvals <= a)) for a in alphas}
    return UniformityDiagnostic(pvalues=pvals, max_deviation=max_dev, rejection_rates=rates)
