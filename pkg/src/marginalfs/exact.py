"""Exact finite-sample null distributions.

Under homogeneity and conditional on the group sizes, the labels read in
increasing order of the values are uniform on the binary sequences with
``n0`` zeros and ``n1`` ones.  Chatterjee's xi is an affine function of the
jump count ``tau`` of that sequence, whose distribution has a closed form;
the Mann-Whitney U distribution follows from the usual counting recurrence.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln
from scipy.stats import norm

from ._validation import check_choice, check_positive_int
from .exceptions import InconsistentStatisticError

ALTERNATIVES = frozenset({"two-sided", "greater", "less"})

# Exact big-integer arithmetic up to this total sample size, log-gamma above.
EXACT_TAU_LIMIT = 1000
_XI_INVERSION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class TauDistribution:
    """Null law of the jump count given group sizes ``(n0, n1)``.

    Attributes
    ----------
    support : ndarray of int64
        ``1, ..., 2 * min(n0, n1) - [n0 == n1]``.
    pmf : ndarray of float64
    cdf : ndarray of float64
        ``P(tau <= support[i])``; computed from exact cumulative sums when
        the exact path is used.
    """

    n0: int
    n1: int
    support: np.ndarray
    pmf: np.ndarray
    cdf: np.ndarray = field(repr=False)

    @property
    def n(self):
        return self.n0 + self.n1

    @property
    def mean(self):
        return float(np.dot(self.support, self.pmf))

    @property
    def var(self):
        mu = self.mean
        return float(np.dot((self.support - mu) ** 2, self.pmf))

    def moment(self, k):
        return float(np.dot(self.support.astype(np.float64) ** k, self.pmf))

    @property
    def xi_values(self):
        """Value of xi corresponding to each support point."""
        return 1.0 - (self.n * self.support) / (2 * self.n0 * self.n1)

    def cdf_at(self, x):
        """``P(tau <= x)`` for integer ``x``."""
        i = np.searchsorted(self.support, x, side="right")
        return 0.0 if i == 0 else float(self.cdf[i - 1])


def _support_max(n0, n1):
    return 2 * min(n0, n1) - (1 if n0 == n1 else 0)


def _tau_numerators(n0, n1):
    """Integer numerators of the pmf over the common denominator.

    With ``D = 2 n0 n1 C(n, n0)``::

        P(tau = x) = (x + 1)^2 C(n0, (x+1)/2) C(n1, (x+1)/2) / D   (x odd)
        P(tau = x) = (n x - x^2) C(n0, x/2) C(n1, x/2) / D          (x even)
    """
    n = n0 + n1
    nums = []
    for x in range(1, _support_max(n0, n1) + 1):
        if x % 2:
            h = (x + 1) // 2
            nums.append((x + 1) ** 2 * math.comb(n0, h) * math.comb(n1, h))
        else:
            h = x // 2
            nums.append((n * x - x * x) * math.comb(n0, h) * math.comb(n1, h))
    return nums, 2 * n0 * n1 * math.comb(n, n0)


def _tau_log_pmf(n0, n1):
    n = n0 + n1
    x = np.arange(1, _support_max(n0, n1) + 1, dtype=np.float64)
    odd = x % 2 == 1
    h = np.where(odd, (x + 1) / 2, x / 2)
    weight = np.where(odd, (x + 1) ** 2, n * x - x * x)

    def lcomb(a, b):
        return gammaln(a + 1) - gammaln(b + 1) - gammaln(a - b + 1)

    with np.errstate(divide="ignore"):
        logw = np.log(weight)
    log_den = math.log(2 * n0 * n1) + lcomb(n, n0)
    # C(n0, h) vanishes for h > n0; only reachable at the odd end when n0 == n1.
    valid = (h <= n0) & (h <= n1)
    out = np.full(x.shape, -np.inf)
    out[valid] = logw[valid] + lcomb(n0, h[valid]) + lcomb(n1, h[valid]) - log_den
    return out


@lru_cache(maxsize=256)
def tau_pmf(n0, n1):
    """Exact pmf of the jump count for a uniform sequence with ``n0`` zeros, ``n1`` ones."""
    n0 = check_positive_int(n0, "n0")
    n1 = check_positive_int(n1, "n1")
    support = np.arange(1, _support_max(n0, n1) + 1, dtype=np.int64)
    if n0 + n1 <= EXACT_TAU_LIMIT:
        nums, den = _tau_numerators(n0, n1)
        pmf = np.array([a / den for a in nums])
        cum = 0
        cdf = np.empty(len(nums))
        for i, a in enumerate(nums):
            cum += a
            cdf[i] = cum / den
    else:
        pmf = np.exp(_tau_log_pmf(n0, n1))
        # log-gamma rounding leaves the total ~1e-12 off; the true total is 1.
        pmf /= pmf.sum()
        cdf = np.minimum(np.cumsum(pmf), 1.0)
    for arr in (support, pmf, cdf):
        arr.flags.writeable = False
    return TauDistribution(n0=n0, n1=n1, support=support, pmf=pmf, cdf=cdf)


def tau_mean(n0, n1):
    n0 = check_positive_int(n0, "n0")
    n1 = check_positive_int(n1, "n1")
    return 2 * n0 * n1 / (n0 + n1)


def tau_variance_equal(m):
    """Variance of the jump count when both groups have size ``m``."""
    m = check_positive_int(m, "m")
    return m * (m - 1) / (2 * m - 1)


def xi_to_tau(observed_xi, n0, n1):
    """Invert ``xi = 1 - n tau / (2 n0 n1)`` to the integer jump count."""
    n = n0 + n1
    raw = (1.0 - float(observed_xi)) * 2 * n0 * n1 / n
    tau = round(raw)
    if abs(raw - tau) > _XI_INVERSION_TOL * max(1.0, abs(raw)):
        raise InconsistentStatisticError(
            f"xi={observed_xi!r} does not correspond to an integer jump count "
            f"for n0={n0}, n1={n1} (got {raw})"
        )
    return int(tau)


def xi_exact_pvalue(observed_xi, n0, n1):
    """One-sided (upper tail) exact p-value ``P(xi >= observed_xi)``.

    Large xi means few jumps, so this is ``P(tau <= tau_obs)``.
    """
    dist = tau_pmf(n0, n1)
    tau = xi_to_tau(observed_xi, dist.n0, dist.n1)
    if tau < 0 or tau > dist.support[-1]:
        raise InconsistentStatisticError(
            f"jump count {tau} outside the support 1..{dist.support[-1]} "
            f"for n0={n0}, n1={n1}"
        )
    if tau == 0:
        raise InconsistentStatisticError(
            f"xi={observed_xi!r} implies zero jumps, impossible with both groups non-empty"
        )
    return min(1.0, dist.cdf_at(tau))


@dataclass(frozen=True, eq=False)
class UNullDistribution:
    """Null law of the Mann-Whitney U statistic on ``{0, ..., n0 * n1}``."""

    n0: int
    n1: int
    pmf: np.ndarray

    @property
    def n(self):
        return self.n0 + self.n1

    @property
    def support(self):
        return np.arange(self.pmf.size)

    @property
    def mean(self):
        return float(np.dot(self.support, self.pmf))

    @property
    def var(self):
        mu = self.mean
        return float(np.dot((self.support - mu) ** 2, self.pmf))

    def sf(self, u):
        """``P(U >= u)`` for integer ``u``."""
        u = max(int(u), 0)
        return float(min(1.0, self.pmf[u:].sum())) if u < self.pmf.size else 0.0

    def cdf(self, u):
        """``P(U <= u)`` for integer ``u``."""
        u = int(u)
        return float(min(1.0, self.pmf[: u + 1].sum())) if u >= 0 else 0.0


@lru_cache(maxsize=64)
def u_null_distribution(n0, n1):
    """Build the U null pmf by conditioning on the group of the largest value.

    ``f(i, j)`` denotes the law for ``i`` group-0 and ``j`` group-1
    observations.  With probability ``i / (i + j)`` the largest value is in
    group 0 and beats all ``j`` group-1 values, so::

        f(i, j)[u] = i/(i+j) f(i-1, j)[u - j] + j/(i+j) f(i, j-1)[u]
    """
    n0 = check_positive_int(n0, "n0", minimum=0)
    n1 = check_positive_int(n1, "n1", minimum=0)
    # prev[j] holds f(i-1, j); row i is built left to right.
    prev = [np.ones(1) for _ in range(n1 + 1)]
    for i in range(1, n0 + 1):
        row = [np.ones(1)]
        for j in range(1, n1 + 1):
            size = i * j + 1
            cur = np.zeros(size)
            a = prev[j]
            cur[j : j + a.size] += (i / (i + j)) * a
            b = row[j - 1]
            cur[: b.size] += (j / (i + j)) * b
            row.append(cur)
        prev = row
    pmf = prev[n1]
    pmf.flags.writeable = False
    return UNullDistribution(n0=n0, n1=n1, pmf=pmf)


def _integer_u(observed_u, side):
    u = float(observed_u)
    r = round(u)
    if abs(u - r) <= 1e-9 * max(1.0, abs(u)):
        return int(r)
    return math.ceil(u) if side == "greater" else math.floor(u)


def u_exact_pvalue(observed_u, n0, n1, alternative="two-sided"):
    """Exact tail probability of U under the null.

    ``greater`` is ``P(U >= u)``, ``less`` is ``P(U <= u)`` and
    ``two-sided`` is twice the smaller tail, capped at 1.
    """
    check_choice(alternative, "alternative", ALTERNATIVES)
    dist = u_null_distribution(check_positive_int(n0, "n0"), check_positive_int(n1, "n1"))
    upper = dist.sf(_integer_u(observed_u, "greater"))
    lower = dist.cdf(_integer_u(observed_u, "less"))
    if alternative == "greater":
        return upper
    if alternative == "less":
        return lower
    # No attainable U is strictly closer to the center: every arrangement is
    # at least as extreme, so p is exactly 1 (the float tails can sum to 1 - eps).
    center = n0 * n1 / 2
    nearest = min(center - math.floor(center), math.ceil(center) - center)
    if nearest >= abs(float(observed_u) - center) - 1e-9:
        return 1.0
    return min(1.0, 2.0 * min(upper, lower))


def u_normal_approx_pvalue(observed_u, n0, n1, alternative="two-sided"):
    """Continuity-corrected normal approximation to :func:`u_exact_pvalue`."""
    check_choice(alternative, "alternative", ALTERNATIVES)
    n0 = check_positive_int(n0, "n0")
    n1 = check_positive_int(n1, "n1")
    mu = n0 * n1 / 2
    sigma = math.sqrt(n0 * n1 * (n0 + n1 + 1) / 12)
    u = float(observed_u)
    upper = float(norm.sf((u - 0.5 - mu) / sigma))
    lower = float(norm.cdf((u + 0.5 - mu) / sigma))
    if alternative == "greater":
        return min(1.0, upper)
    if alternative == "less":
        return min(1.0, lower)
    return min(1.0, 2.0 * min(upper, lower))
