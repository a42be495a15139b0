import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marginalfs import exact
from marginalfs.exact import (
    tau_mean,
    tau_pmf,
    tau_variance_equal,
    u_exact_pvalue,
    u_normal_approx_pvalue,
    u_null_distribution,
    xi_exact_pvalue,
    xi_to_tau,
)
from marginalfs.exceptions import InconsistentStatisticError
from marginalfs.testkit import brute_tau_pmf, enumerate_binary_sequences


def test_tau_pmf_small_cases():
    d = tau_pmf(1, 1)
    assert d.support.tolist() == [1] and d.pmf.tolist() == [1.0]
    d = tau_pmf(1, 2)
    assert d.support.tolist() == [1, 2]
    assert d.pmf[0] == pytest.approx(2 / 3, abs=1e-15)
    assert d.pmf[1] == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("n0, n1", [(0, 3), (3, 0), (-1, 2)])
def test_tau_pmf_domain(n0, n1):
    with pytest.raises(ValueError):
        tau_pmf(n0, n1)


def test_tau_mean_examples():
    assert tau_mean(1, 2) == pytest.approx(4 / 3)
    assert tau_mean(1, 2) == pytest.approx(tau_pmf(1, 2).mean, abs=1e-15)
    assert tau_mean(1, 1) == 1
    assert tau_mean(3, 3) == 3


def test_tau_variance_examples():
    assert tau_variance_equal(1) == 0
    assert tau_variance_equal(2) == pytest.approx(2 / 3)
    assert tau_variance_equal(5) == pytest.approx(20 / 9)
    assert tau_pmf(5, 5).var == pytest.approx(20 / 9, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 13))
def test_tau_pmf_matches_enumeration(n):
    for n0 in range(1, n):
        dist = tau_pmf(n0, n - n0)
        brute = brute_tau_pmf(n0, n - n0)
        assert dist.support.tolist() == list(brute)
        for t, pr in zip(dist.support.tolist(), dist.pmf):
            assert abs(pr - float(brute[t])) <= 1e-12


def test_tau_numerators_are_exact_fractions():
    # the integer path reproduces the enumeration as exact rationals
    for n0, n1 in [(3, 4), (5, 5), (2, 7)]:
        nums, den = exact._tau_numerators(n0, n1)
        brute = brute_tau_pmf(n0, n1)
        assert [Fraction(a, den) for a in nums] == list(brute.values())


def test_moments_grid():
    for n0 in range(1, 51):
        for n1 in range(1, 51):
            d = tau_pmf(n0, n1)
            n = n0 + n1
            assert abs(d.pmf.sum() - 1) <= 1e-12
            assert abs(d.mean - 2 * n0 * n1 / n) <= 1e-10
            assert abs(float(np.dot(d.xi_values, d.pmf))) <= 1e-12


@pytest.mark.parametrize("m", range(1, 9))
def test_equal_groups_symmetry_and_variance(m):
    d = tau_pmf(m, m)
    pmf = dict(zip(d.support.tolist(), d.pmf))
    for x, pr in pmf.items():
        assert abs(pr - pmf.get(2 * m - x, 0.0)) <= 1e-10
    assert abs(d.var - m * (m - 1) / (2 * m - 1)) <= 1e-10
    assert abs(d.moment(2) - m * (2 * m * m - 1) / (2 * m - 1)) <= 1e-10


def test_log_domain_agrees_with_integer_path():
    for n0, n1 in [(30, 40), (100, 100), (250, 300)]:
        nums, den = exact._tau_numerators(n0, n1)
        direct = np.array([a / den for a in nums])
        logpmf = np.exp(exact._tau_log_pmf(n0, n1))
        assert np.max(np.abs(direct - logpmf)) <= 1e-12


def test_large_sizes_use_log_domain():
    d = tau_pmf(700, 800)
    assert abs(d.pmf.sum() - 1) <= 1e-12
    assert d.mean == pytest.approx(tau_mean(700, 800), rel=1e-10)


def test_xi_pvalue_examples():
    assert xi_exact_pvalue(0.25, 1, 2) == pytest.approx(2 / 3)
    assert xi_exact_pvalue(-0.5, 1, 2) == pytest.approx(1.0)


def test_xi_inversion():
    assert xi_to_tau(0.25, 1, 2) == 1
    assert xi_to_tau(0.25 + 1e-12, 1, 2) == 1
    with pytest.raises(InconsistentStatisticError):
        xi_to_tau(0.3, 1, 2)
    with pytest.raises(InconsistentStatisticError):
        xi_exact_pvalue(0.3, 1, 2)


def test_xi_pvalue_range():
    d = tau_pmf(6, 9)
    for xi in d.xi_values:
        p = xi_exact_pvalue(float(xi), 6, 9)
        assert 0 < p <= 1


def test_u_exact_examples():
    assert u_exact_pvalue(1, 1, 1, "greater") == 0.5
    assert u_exact_pvalue(4, 2, 2, "greater") == pytest.approx(1 / 6)
    for n0, n1 in [(3, 4), (5, 5), (2, 8)]:
        assert u_exact_pvalue(n0 * n1 / 2, n0, n1, "two-sided") == 1.0


def test_u_null_distribution_moments():
    for n0, n1 in [(1, 1), (3, 5), (7, 7), (10, 4)]:
        d = u_null_distribution(n0, n1)
        n = n0 + n1
        assert abs(d.pmf.sum() - 1) <= 1e-12
        assert abs(d.mean - n0 * n1 / 2) <= 1e-12 * n0 * n1
        assert abs(d.var - n0 * n1 * (n + 1) / 12) <= 1e-12 * n0 * n1 * (n + 1)


@pytest.mark.parametrize("n", range(2, 11))
def test_u_exact_matches_enumeration(n):
    for n0 in range(1, n):
        n1 = n - n0
        us = []
        for seq in enumerate_binary_sequences(n0, n1):
            seq = np.array(seq)
            a, b = np.flatnonzero(seq == 0), np.flatnonzero(seq == 1)
            us.append(int((a[:, None] > b[None, :]).sum()))
        us = np.array(us)
        center = n0 * n1 / 2
        for u in range(n0 * n1 + 1):
            assert u_exact_pvalue(u, n0, n1, "greater") == pytest.approx(np.mean(us >= u), abs=1e-12)
            assert u_exact_pvalue(u, n0, n1, "less") == pytest.approx(np.mean(us <= u), abs=1e-12)
            two = min(1.0, np.mean(np.abs(us - center) >= abs(u - center)))
            assert u_exact_pvalue(u, n0, n1, "two-sided") == pytest.approx(two, abs=1e-12)


def test_normal_approximation():
    assert u_normal_approx_pvalue(50 * 50 / 2, 50, 50) == pytest.approx(1.0, abs=1e-2)
    for u in (1000, 1200, 1500, 1800):
        assert abs(u_normal_approx_pvalue(u, 50, 50) - u_exact_pvalue(u, 50, 50)) <= 0.01


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 20), st.integers(1, 20), st.data())
def test_u_pvalue_monotone(n0, n1, data):
    u1 = data.draw(st.integers(0, n0 * n1))
    u2 = data.draw(st.integers(u1, n0 * n1))
    assert u_exact_pvalue(u2, n0, n1, "greater") <= u_exact_pvalue(u1, n0, n1, "greater")
    assert u_exact_pvalue(u1, n0, n1, "less") <= u_exact_pvalue(u2, n0, n1, "less")
    for alt in ("greater", "less", "two-sided"):
        assert 0 < u_exact_pvalue(u1, n0, n1, alt) <= 1


def test_u_pvalue_rejects_unknown_alternative():
    with pytest.raises(ValueError):
        u_exact_pvalue(1, 2, 2, "both")


def test_support_endpoints():
    assert tau_pmf(4, 4).support[-1] == 7
    assert tau_pmf(3, 5).support[-1] == 6
    assert math.isclose(tau_pmf(3, 5).cdf[-1], 1.0)
