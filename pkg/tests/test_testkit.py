from fractions import Fraction

import numpy as np
import pytest

from conftest import null_sample
from marginalfs.exceptions import BudgetExceededError
from marginalfs.marginal import MarginalStatistic
from marginalfs.rankstats import LabeledSample
from marginalfs.resampling import exhaustive_u_statistic
from marginalfs.streams import StreamKey, make_stream
from marginalfs.testkit import (
    EnumerationBudget,
    brute_permutation_pvalue,
    brute_tau_pmf,
    brute_u_statistic,
    enumerate_binary_sequences,
    run_oracle_suite,
)


def test_enumeration_examples():
    assert set(enumerate_binary_sequences(1, 1)) == {(0, 1), (1, 0)}
    assert len(list(enumerate_binary_sequences(1, 2))) == 3
    seqs = list(enumerate_binary_sequences(3, 3))
    assert len(seqs) == len(set(seqs)) == 20


def test_brute_tau_example():
    assert brute_tau_pmf(1, 2) == {1: Fraction(2, 3), 2: Fraction(1, 3)}


def test_budget():
    with pytest.raises(BudgetExceededError):
        list(enumerate_binary_sequences(10, 10, EnumerationBudget(1000)))
    with pytest.raises(ValueError):
        EnumerationBudget(0)
    s = LabeledSample([0, 1] * 10, np.arange(20.0))
    with pytest.raises(BudgetExceededError):
        brute_u_statistic(s, 10, "xi", EnumerationBudget(100))


def test_brute_u_statistic_examples():
    s = null_sample(make_stream(StreamKey(1)), 4, 3)
    stat = MarginalStatistic("xi")
    assert brute_u_statistic(s, 7, "xi") == stat(s)
    constant = LabeledSample([0] * 6, np.arange(6.0))
    assert brute_u_statistic(constant, 3, "auc") == 0.5
    assert brute_u_statistic(constant, 3, "xi") == 0.0


@pytest.mark.parametrize("kernel", ["auc", "xi"])
def test_brute_matches_exhaustive_with_ties(kernel):
    stream = make_stream(StreamKey(2))
    for _ in range(20):
        n = int(stream.integers(3, 10))
        s = LabeledSample(stream.integers(0, 2, n), stream.integers(0, 3, n).astype(float))
        m = int(stream.integers(1, n + 1))
        assert brute_u_statistic(s, m, kernel) == exhaustive_u_statistic(s, m, kernel)


def test_brute_permutation_examples():
    values = np.arange(6.0)
    s = LabeledSample([1, 1, 1, 0, 0, 0], values)
    assert brute_permutation_pvalue(MarginalStatistic("auc"), s, "greater", 0.5) == 1 / 20
    assert brute_permutation_pvalue(lambda x: 3.0, s) == 1.0


def test_oracle_suite_passes():
    results = run_oracle_suite(max_n=10, verbose=False)
    assert [name for name, _, _ in results] == [
        "tau_pmf", "u_exact_pvalue", "exhaustive_u_statistic", "permutation_pvalue"]
    assert all(ok for _, ok, _ in results)
