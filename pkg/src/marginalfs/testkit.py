"""Brute-force oracles for the closed-form and Monte Carlo code paths.

Everything here enumerates directly and deliberately avoids the exact
distribution code and the compiled kernels.  Only the scalar statistics of
:mod:`marginalfs.rankstats` are shared.
"""

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .exceptions import BudgetExceededError
from .rankstats import LabeledSample, auc, jump_count, rank_values, xi_binary
from .streams import StreamKey, make_stream, stream_id

_DEFAULT_TIE_KEY = StreamKey(0, stream_id("ties"))


@dataclass(frozen=True)
class EnumerationBudget:
    max_states: int = 10**6

    def __post_init__(self):
        if self.max_states <= 0:
            raise ValueError("max_states must be positive")

    def check(self, count, what):
        if count > self.max_states:
            raise BudgetExceededError(f"{what}: {count} states exceed the budget {self.max_states}")


DEFAULT_BUDGET = EnumerationBudget()


def enumerate_binary_sequences(n0, n1, budget=DEFAULT_BUDGET):
    """Yield every 0/1 tuple with ``n0`` zeros and ``n1`` ones, once each."""
    n = n0 + n1
    budget.check(math.comb(n, n0), f"B({n0},{n1})")
    for ones in combinations(range(n), n1):
        seq = [0] * n
        for i in ones:
            seq[i] = 1
        yield tuple(seq)


def brute_tau_pmf(n0, n1, budget=DEFAULT_BUDGET):
    """Jump-count histogram over all sequences, as exact fractions keyed by tau."""
    counts = Counter(jump_count(np.array(s)) for s in enumerate_binary_sequences(n0, n1, budget))
    total = sum(counts.values())
    return {t: Fraction(c, total) for t, c in sorted(counts.items())}


def _plain_kernel(kernel, sample, tie_key):
    perm = rank_values(sample.values, make_stream(tie_key))
    if kernel == "xi":
        return xi_binary(sample, perm)
    if sample.labels.min() == sample.labels.max():
        return 0.5
    return auc(sample, perm)


def brute_u_statistic(sample, m, kernel, budget=DEFAULT_BUDGET, tie_key=_DEFAULT_TIE_KEY):
    """Average of ``kernel`` over all ``m``-subsets by a plain loop.

    Ties are broken once on the full sample and inherited by each subset, so
    the result matches :func:`marginalfs.resampling.exhaustive_u_statistic`.
    """
    n = sample.n
    budget.check(math.comb(n, m), f"C({n},{m})")
    full = rank_values(sample.values, make_stream(tie_key))
    # strictly increasing surrogate values carry the full-sample tie-breaks
    surrogate = full.ranks.astype(np.float64)
    first = None
    acc = 0.0
    same = True
    count = 0
    for idx in combinations(range(n), m):
        idx = list(idx)
        sub = LabeledSample(sample.labels[idx], surrogate[idx])
        v = _plain_kernel(kernel, sub, tie_key)
        count += 1
        if first is None:
            first = acc = v
            continue
        acc += v
        if v != first:
            same = False
    return first if same else acc / count


def brute_permutation_pvalue(statistic, sample, alternative="greater", center=0.0,
                             budget=DEFAULT_BUDGET, tol=1e-12):
    """Exact permutation p-value over the distinct label arrangements.

    Every arrangement of the observed label multiset is equally likely under
    the null, so the p-value is the fraction of the ``C(n, n1)`` arrangements
    whose statistic is at least as extreme as the observed one (ties count).
    """
    labels = sample.labels
    n = labels.size
    n1 = int(labels.sum())
    budget.check(math.comb(n, n1), f"C({n},{n1}) arrangements")
    observed = statistic(sample)
    slack = tol * max(1.0, abs(observed - center) if alternative == "two-sided" else abs(observed))
    hits = 0
    total = 0
    for ones in combinations(range(n), n1):
        arr = np.zeros(n, dtype=np.int8)
        arr[list(ones)] = 1
        v = statistic(LabeledSample(arr, sample.values))
        total += 1
        if alternative == "greater":
            hit = v >= observed - slack
        elif alternative == "less":
            hit = v <= observed + slack
        else:
            hit = abs(v - center) >= abs(observed - center) - slack
        hits += bool(hit)
    return hits / total


def run_oracle_suite(max_n=12, verbose=True, out=None):
    """Cross-check the closed-form and compiled paths against the oracles.

    Returns the list of ``(name, passed, detail)`` tuples.
    """
    import sys

    from .exact import tau_pmf, u_exact_pvalue
    from .marginal import MarginalStatistic
    from .permutation import PermutationScheme, permutation_pvalue
    from .resampling import exhaustive_u_statistic

    out = out or sys.stdout
    results = []

    worst = 0.0
    for n in range(2, max_n + 1):
        for n0 in range(1, n):
            dist = tau_pmf(n0, n - n0)
            brute = brute_tau_pmf(n0, n - n0)
            if set(brute) != set(dist.support.tolist()):
                worst = math.inf
                break
            for t, pr in zip(dist.support.tolist(), dist.pmf):
                worst = max(worst, abs(float(brute[t]) - pr))
    results.append(("tau_pmf", worst <= 1e-12, f"max atom error {worst:.3g}"))

    rng = make_stream(StreamKey(0, stream_id("verify")))
    worst = 0.0
    for n in range(2, 11):
        for n0 in range(1, n):
            # U of each arrangement, with observation values equal to positions
            us = []
            for seq in enumerate_binary_sequences(n0, n - n0):
                seq = np.array(seq)
                pos0 = np.flatnonzero(seq == 0)
                pos1 = np.flatnonzero(seq == 1)
                us.append(int((pos0[:, None] > pos1[None, :]).sum()))
            us = np.array(us)
            for u in range(n0 * (n - n0) + 1):
                brute = np.count_nonzero(us >= u) / us.size
                worst = max(worst, abs(brute - u_exact_pvalue(u, n0, n - n0, "greater")))
    results.append(("u_exact_pvalue", worst <= 1e-12, f"max error {worst:.3g}"))

    mismatches = 0
    for _ in range(30):
        n = int(rng.integers(4, 10))
        m = int(rng.integers(1, n + 1))
        labels = rng.integers(0, 2, size=n)
        sample = LabeledSample(labels, rng.normal(size=n).round(1))
        for kernel in ("auc", "xi"):
            if exhaustive_u_statistic(sample, m, kernel) != brute_u_statistic(sample, m, kernel):
                mismatches += 1
    results.append(("exhaustive_u_statistic", mismatches == 0, f"{mismatches} mismatches"))

    mismatches = 0
    for _ in range(20):
        n = int(rng.integers(3, 8))
        n1 = int(rng.integers(1, n))
        labels = rng.permutation(np.array([0] * (n - n1) + [1] * n1))
        sample = LabeledSample(labels, rng.normal(size=n))
        for kernel, alt in (("auc", "two-sided"), ("xi", "greater")):
            stat = MarginalStatistic(kernel)
            mc = permutation_pvalue(stat, sample, PermutationScheme(1, alternative=alt))
            brute = brute_permutation_pvalue(stat, sample, alt, stat.center)
            mismatches += mc != brute
    results.append(("permutation_pvalue", mismatches == 0, f"{mismatches} mismatches"))

    if verbose:
        for name, ok, detail in results:
            print(f"{'PASS' if ok else 'FAIL'}\t{name}\t{detail}", file=out)
    return results
