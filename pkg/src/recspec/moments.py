"""Closed-form lower bounds on hidden-state growth, evaluated in log domain.

The central quantity is the factorial ratio (n+k)!/(n! n^k), equal to the
product prod_{d=1..k} (1 + d/n).  It lower-bounds E||W^k x||^2 via
bound(n, k) = n/(k+1) * (n+k)!/(n! n^k) for a complex Gaussian W with entry
variance 1/n and x ~ N(0, I_n).  Summing over k gives the hidden-state bound.

Everything is computed in log scale first (the ratio reaches e^{t^2/2n},
overflowing doubles near t ~ 38 sqrt(n)); linear-scale wrappers exponentiate.
"""

from __future__ import annotations

import math

import numpy as np

from .ensemble import EULER_GAMMA

__all__ = [
    "double_scaling_factor",
    "exact_partial_harmonic",
    "explosion_envelope",
    "harmonic_asymptotic",
    "hidden_state_lower_bound",
    "hidden_state_lower_bound_log",
    "hidden_state_lower_bound_log_series",
    "log_factorial_ratio",
    "log_factorial_ratio_series",
    "expected_modulus_moment",
    "moment_lower_bound",
    "moment_lower_bound_log",
    "moment_lower_bound_log_series",
]


def log_factorial_ratio_series(n: int, k_max: int) -> np.ndarray:
    """log[(n+k)!/(n! n^k)] for k = 0..k_max, via the cumulative product form.

    Entry k is sum_{d=1..k} log1p(d/n); numpy's pairwise summation keeps the
    accumulation error ~log2(k) ulps even for k up to 10^7.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")
    out = np.empty(k_max + 1)
    out[0] = 0.0
    if k_max > 0:
        d = np.arange(1, k_max + 1, dtype=np.float64)
        np.cumsum(np.log1p(d / n), out=out[1:])
    return out


def log_factorial_ratio(n: int, k: int) -> float:
    """log[(n+k)!/(n! n^k)] = sum_{d=1..k} log(1 + d/n)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if k == 0:
        return 0.0
    d = np.arange(1, k + 1, dtype=np.float64)
    return float(np.sum(np.log1p(d / n)))


def moment_lower_bound_log(n: int, k: int) -> float:
    """log of the E||W^k x||^2 lower bound: log n - log(k+1) + log factorial ratio."""
    return log_factorial_ratio(n, k) + math.log(n) - math.log1p(k)


def moment_lower_bound(n: int, k: int) -> float:
    """Lower bound on E||W^k x||^2; equals n at k = 0.  May overflow to inf
    for extreme (n, k); use :func:`moment_lower_bound_log` then."""
    return math.exp(moment_lower_bound_log(n, k))


def moment_lower_bound_log_series(n: int, k_max: int) -> np.ndarray:
    """log moment bounds for all k = 0..k_max in one O(k_max) pass."""
    lfr = log_factorial_ratio_series(n, k_max)
    k = np.arange(k_max + 1, dtype=np.float64)
    return lfr + math.log(n) - np.log1p(k)


def expected_modulus_moment(n: int, k: int) -> float:
    """E|lambda_i|^{2k} for one eigenvalue of the complex ensemble: bound / n."""
    return math.exp(log_factorial_ratio(n, k) - math.log1p(k))


def hidden_state_lower_bound_log_series(n: int, t_max: int) -> np.ndarray:
    """log sum_{k=0..t} bound(n, k) for every t = 0..t_max (cumulative log-sum-exp)."""
    return np.logaddexp.accumulate(moment_lower_bound_log_series(n, t_max))


def hidden_state_lower_bound_log(n: int, t: int) -> float:
    """log of the E||h_t||^2 lower bound sum_{k=0..t} bound(n, k)."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return float(hidden_state_lower_bound_log_series(n, t)[-1])


def hidden_state_lower_bound(n: int, t: int) -> float:
    """Linear-scale E||h_t||^2 lower bound; equals n at t = 0."""
    return math.exp(hidden_state_lower_bound_log(n, t))


def exact_partial_harmonic(t: int) -> float:
    """sum_{k=0..t} 1/(k+1), i.e. the harmonic number H_{t+1}, exactly rounded.

    math.fsum gives the correctly rounded double of the exact sum; this is
    the oracle the asymptotic form is checked against (t up to 10^7 is fine).
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return math.fsum(1.0 / (k + 1.0) for k in range(t + 1))


def harmonic_asymptotic(t: int) -> float:
    """Asymptotic form of sum_{k=0..t} 1/(k+1) = H_{t+1}, accurate to O(1/t^2).

    Uses log(t+1) + gamma + 1/(2(t+1)); the remaining error is
    -1/(12 (t+1)^2) + O(1/t^4).
    """
    if t < 2:
        raise ValueError(f"t must be at least 2, got {t}")
    return math.log(t + 1.0) + EULER_GAMMA + 0.5 / (t + 1.0)


def double_scaling_factor(n: int, k: int) -> float:
    """exp(k^2 / 2n): the double-scaling limit of the factorial ratio at k = alpha sqrt(n)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return math.exp(k * k / (2.0 * n))


def explosion_envelope(n: int, t: int) -> float:
    """(n/t) exp(t^2/2n): growth envelope of the normalized hidden-state bound
    once t ~ sqrt(n).

    A scale indicator, not a bound: in the explosion window t in
    [sqrt(n), 4 sqrt(n)] it sits a factor of roughly t above the exact
    normalized sum (whose sharp prefactor is n/t^2 rather than n/t), while
    matching its e^{t^2/2n} growth rate.
    """
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    return (n / t) * math.exp(t * t / (2.0 * n))
