"""Closed-form probability helpers for the two-threshold protocol.

Covers the chi-square law of the cross-gain sum, a polynomial lower bound on
its CDF near zero, the per-user and per-cell qualification probabilities,
and small numeric checks for the asymptotic arguments behind the protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .scheduling import DosParams

__all__ = [
    "AllFailTrend",
    "ScalingCheck",
    "all_fail_trend",
    "chi2_cdf",
    "chi2_cdf_poly_bound",
    "gamma_int",
    "poly_bound_coefficient",
    "prob_at_least_one",
    "qualification_probability",
    "regularized_lower_gamma",
    "scaling_condition_satisfied",
]


def gamma_int(n: int) -> float:
    """Complete gamma function at integer n >= 1, i.e. (n-1)!."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return float(math.factorial(n - 1))


def regularized_lower_gamma(n: int, x) -> np.ndarray | float:
    """Regularized lower incomplete gamma P(n, x) for integer n >= 1.

    Equals the CDF at x of a sum of n unit-mean exponentials. Uses the
    ascending series for small x (no cancellation) and the complement of the
    finite Erlang tail sum otherwise; both are exact expansions for integer
    order, so no generic special-function machinery is required.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("x must be nonnegative")
    out = np.empty_like(x_arr)
    small = x_arr < n + 1.0
    if np.any(small):
        out[small] = _lower_series(n, x_arr[small])
    if np.any(~small):
        out[~small] = _one_minus_tail(n, x_arr[~small])
    if np.isscalar(x) or x_arr.ndim == 0:
        return float(out)
    return out


def _lower_series(n: int, x: np.ndarray) -> np.ndarray:
    # P(n, x) = x^n e^{-x} / n! * sum_{m>=0} x^m / ((n+1) ... (n+m))
    lead = x**n * np.exp(-x) / math.factorial(n)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for m in range(1, 500):
        term = term * x / (n + m)
        total += term
        if term.max(initial=0.0) < 1e-18 * total.max(initial=1.0):
            break
    return lead * total


def _one_minus_tail(n: int, x: np.ndarray) -> np.ndarray:
    # P(n, x) = 1 - e^{-x} sum_{j<n} x^j / j!
    term = np.ones_like(x)
    total = np.ones_like(x)
    for j in range(1, n):
        term = term * x / j
        total += term
    return 1.0 - np.exp(-x) * total


def chi2_cdf(K: int, x) -> np.ndarray | float:
    """CDF at x of the chi-square law with 2(K-1) degrees of freedom.

    This is the law of twice the sum of the K-1 cross-link power gains of
    one user. K=1 has an empty sum: all mass at zero, so the CDF is 1 for
    any x >= 0.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("x must be nonnegative")
    scalar = np.isscalar(x) or x_arr.ndim == 0
    if K == 1:
        out = np.ones_like(x_arr)
        return float(out) if scalar else out
    out = regularized_lower_gamma(K - 1, x_arr / 2.0)
    return float(out) if scalar else out


def poly_bound_coefficient(K: int) -> float:
    """Coefficient c of the c * x**(K-1) lower bound on chi2_cdf near zero."""
    if K < 2:
        raise ValueError("defined for K >= 2")
    m = K - 1
    return math.exp(-1.0) * 2.0 ** (-m) / (m * gamma_int(m))


def chi2_cdf_poly_bound(K: int, x) -> np.ndarray | float:
    """Polynomial lower bound c * x**(K-1) <= chi2_cdf(K, x), valid on [0, 2).

    Outside that range the inequality is not guaranteed, so x >= 2 raises.
    """
    c = poly_bound_coefficient(K)
    x_arr = np.asarray(x, dtype=float)
    if np.any((x_arr < 0) | (x_arr >= 2)):
        raise ValueError("bound is stated for 0 <= x < 2")
    out = c * x_arr ** (K - 1)
    return float(out) if (np.isscalar(x) or x_arr.ndim == 0) else out


def qualification_probability(K: int, snr: float, params: DosParams) -> float:
    """Probability that one user passes both thresholds under full coupling.

    The serving gain is unit-mean exponential, so the signal test passes
    with probability exp(-eta_tr); the cross-gain sum is independent of it
    and its CDF is the chi-square law at twice the argument. Exact when all
    amplitude factors are 1.
    """
    if snr <= 0:
        raise ValueError("snr must be positive")
    p_signal = math.exp(-params.eta_tr)
    limit = params.eta_I / snr if params.interference_includes_snr else params.eta_I
    p_interference = float(chi2_cdf(K, 2.0 * limit))
    return p_signal * p_interference


def prob_at_least_one(K: int, N: int, snr: float, params: DosParams) -> float:
    """Probability that a cell of N users has at least one passing both tests.

    Exact under full coupling (users are independent); a lower bound when
    cross amplitudes are below 1, since smaller couplings only help.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    q = qualification_probability(K, snr, params)
    # 1 - (1-q)^N without cancellation for tiny q
    return -math.expm1(N * math.log1p(-q)) if q < 1.0 else 1.0


class ScalingCheck(NamedTuple):
    """Growth driver N**(1-epsilon) / snr**(K-1) and its threshold verdict."""

    satisfied: bool
    driver: float


def scaling_condition_satisfied(
    K: int, N: int, snr: float, epsilon: float, threshold: float = 1.0
) -> ScalingCheck:
    """Check whether the user count outpaces snr**(K-1) after thinning.

    The per-cell count of users passing both tests concentrates around
    N**(1-epsilon) / snr**(K-1) up to constants; the at-least-one event
    holds with high probability only when this driver grows.
    """
    if K < 1 or N < 1:
        raise ValueError("K and N must be >= 1")
    if snr <= 0:
        raise ValueError("snr must be positive")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    driver = N ** (1.0 - epsilon) / snr ** (K - 1)
    return ScalingCheck(satisfied=driver > threshold, driver=driver)


@dataclass
class AllFailTrend:
    """Trend data for the no-qualifier probability along a growing grid.

    For a per-user pass probability f(x) among x users, ``all_fail_prob``
    holds (1 - f(x)) ** x and ``expected_successes`` holds x * f(x). The
    first tends to zero exactly when the second diverges.
    """

    x: np.ndarray
    expected_successes: np.ndarray
    all_fail_prob: np.ndarray


def all_fail_trend(f: Callable[[np.ndarray], np.ndarray], x_grid) -> AllFailTrend:
    """Evaluate the all-fail probability and expected successes along a grid."""
    x = np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or len(x) == 0:
        raise ValueError("x_grid must be a nonempty 1-D array")
    if np.any(x <= 0):
        raise ValueError("x_grid entries must be positive")
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        raise ValueError("f must map the grid to same-shape values")
    if np.any((fx < 0) | (fx > 1)):
        raise ValueError("f(x) must lie in [0, 1] on the grid")
    with np.errstate(divide="ignore"):
        log_term = np.log1p(-fx)
    all_fail = np.exp(x * log_term)
    return AllFailTrend(x=x, expected_successes=x * fx, all_fail_prob=all_fail)
