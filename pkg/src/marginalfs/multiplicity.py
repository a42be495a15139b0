"""False discovery rate control across features.

Both procedures are step-up rules on the sorted p-values
``p_(1) <= ... <= p_(p)``: reject the ``k*`` smallest where
``k* = max{i : p_(i) * p * c / i <= alpha}``.  Benjamini-Hochberg uses
``c = 1``; Benjamini-Yekutieli uses the harmonic number
``c(p) = 1 + 1/2 + ... + 1/p``, which keeps the FDR below ``alpha`` under
arbitrary dependence between the tests.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_positive_int, check_probability
from .exact import u_null_distribution
from .streams import StreamKey

PROCEDURES = ("by", "bh")
# A p-value on its threshold is selected.  Decimal inputs such as 0.05 * 3
# land a few ulps above 0.15, so the comparison allows this relative slack.
THRESHOLD_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class PValueVector:
    """Marginal p-values with the ids of the features they belong to."""

    values: np.ndarray
    feature_ids: np.ndarray = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("p-values must form a non-empty 1-d array")
        if np.any(~np.isfinite(vals)) or np.any(vals <= 0) or np.any(vals > 1):
            raise ValueError("p-values must lie in (0, 1]")
        ids = self.feature_ids
        ids = np.arange(vals.size) if ids is None else np.asarray(ids)
        if ids.shape != vals.shape:
            raise ValueError("feature_ids must match the p-values in length")
        if len(set(ids.tolist())) != ids.size:
            raise ValueError("feature_ids must be unique")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "feature_ids", ids)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class SelectionResult:
    """Outcome of an FDR procedure.

    ``selected`` holds the ids with ``adjusted <= alpha`` (up to a relative
    slack of ``THRESHOLD_RTOL``); ``mask`` is the same information aligned
    with the input order.
    """

    selected: frozenset
    alpha: float
    adjusted: np.ndarray
    procedure: str
    feature_ids: np.ndarray = field(repr=False)
    mask: np.ndarray = field(repr=False)

    @property
    def n_selected(self):
        return len(self.selected)


def harmonic_number(p):
    p = check_positive_int(p, "p")
    return math.fsum(1.0 / k for k in range(1, p + 1))


def _as_pvalue_vector(pvalues, feature_ids):
    if isinstance(pvalues, PValueVector):
        return pvalues
    return PValueVector(pvalues, feature_ids)


def step_up_adjust(values, c):
    """Adjusted p-values ``min_{j >= i} min(1, p_(j) * p * c / j)`` in input order.

    Sorting is stable on ``(p, position)`` so ties are handled deterministically.
    """
    p = values.size
    order = np.lexsort((np.arange(p), values))
    scaled = values[order] * (p * c) / np.arange(1, p + 1)
    adjusted_sorted = np.minimum.accumulate(scaled[::-1])[::-1]
    adjusted = np.empty(p)
    adjusted[order] = np.minimum(adjusted_sorted, 1.0)
    return adjusted


def _select(pvalues, alpha, feature_ids, procedure):
    alpha = check_probability(alpha, "alpha")
    pv = _as_pvalue_vector(pvalues, feature_ids)
    c = harmonic_number(len(pv)) if procedure == "by" else 1.0
    adjusted = step_up_adjust(pv.values, c)
    mask = adjusted <= alpha * (1 + THRESHOLD_RTOL)
    selected = frozenset(pv.feature_ids[mask].tolist())
    return SelectionResult(selected=selected, alpha=alpha, adjusted=adjusted,
                           procedure=procedure, feature_ids=pv.feature_ids, mask=mask)


def by_select(pvalues, alpha, feature_ids=None):
    """Benjamini-Yekutieli selection at FDR level ``alpha``."""
    return _select(pvalues, alpha, feature_ids, "by")


def bh_select(pvalues, alpha, feature_ids=None):
    """Benjamini-Hochberg selection at FDR level ``alpha``."""
    return _select(pvalues, alpha, feature_ids, "bh")


def fdr_select(pvalues, alpha, procedure="by", feature_ids=None):
    if procedure not in PROCEDURES:
        raise ValueError(f"procedure must be one of {PROCEDURES}, got {procedure!r}")
    return _select(pvalues, alpha, feature_ids, procedure)


@dataclass(frozen=True)
class FDRSimulationResult:
    fdr: float
    se: float
    mean_rejections: float
    power: float
    reps: int


def fdr_simulation(p, n_nonnull, effect, alpha, reps, key, *, n=60, rho=0.0, procedure="by"):
    """Estimate the realised FDR ``E[V / max(R, 1)]`` on synthetic two-class data.

    Each replication draws balanced labels and ``p`` Gaussian features, the
    first ``n_nonnull`` of which are shifted by ``effect`` standard
    deviations in class 1.  With ``rho > 0`` all features share an
    equicorrelated component.  Features are tested with the exact two-sided
    Mann-Whitney test.
    """
    from .datasets import generate_synthetic

    reps = check_positive_int(reps, "reps")
    if not isinstance(key, StreamKey):
        raise TypeError("key must be a StreamKey")
    ratios = np.empty(reps)
    rejections = np.empty(reps)
    power = np.empty(reps)
    n1 = n // 2
    n0 = n - n1
    dist = u_null_distribution(n0, n1)
    # P(U >= u) and P(U <= u) lookup tables
    upper = np.cumsum(dist.pmf[::-1])[::-1]
    lower = np.cumsum(dist.pmf)
    for r in range(reps):
        data = generate_synthetic(n=n, p=p, n_nonnull=n_nonnull, shift=effect, rho=rho,
                                  key=key.child("simulation", r))
        u = _u_statistics(data.y, data.x)
        pv = np.minimum(1.0, 2.0 * np.minimum(upper[u], lower[u]))
        res = fdr_select(pv, alpha, procedure)
        is_null = np.arange(p) >= n_nonnull
        v = int(np.count_nonzero(res.mask & is_null))
        rcount = int(np.count_nonzero(res.mask))
        ratios[r] = v / max(rcount, 1)
        rejections[r] = rcount
        power[r] = np.count_nonzero(res.mask & ~is_null) / n_nonnull if n_nonnull else 0.0
    se = float(ratios.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    return FDRSimulationResult(fdr=float(ratios.mean()), se=se,
                               mean_rejections=float(rejections.mean()),
                               power=float(power.mean()), reps=reps)


def _u_statistics(y, x):
    """Integer U for every column of ``y`` (continuous data, no ties expected)."""
    ranks = np.argsort(np.argsort(y, axis=0, kind="stable"), axis=0) + 1
    n0 = int(np.count_nonzero(x == 0))
    return ranks[x == 0].sum(axis=0) - n0 * (n0 + 1) // 2
