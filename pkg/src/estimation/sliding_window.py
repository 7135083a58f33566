"""
Equal-weight sliding-window estimation (SWSCAN).

The variance at symbol i is estimated from the m residuals on either
side of it, leaving z2_i itself out:

    sigma2_i(m) = 1/(2m) * sum_{k=1..m} (z2_{i-k} + z2_{i+k})

Excluding the centre makes sigma2_i(m) and z2_i two independent
observations of the same variance, so the mean squared difference
E(m) = mean_i (sigma2_i(m) - z2_i)^2 can be minimised over m to pick the
half window.
"""

import logging

import numpy as np

from .residuals import ResidualSeries

logger = logging.getLogger(__name__)

# Relative slack when comparing window errors, so ties go to the smaller m
_TIE_TOLERANCE = 1e-12


def window_mean_estimates(series: ResidualSeries, m: int) -> np.ndarray:
    """
    Centre-excluded window means for every symbol, in O(N).

    The first estimate is summed directly; each following one is obtained
    from its predecessor by adding the sample entering the window, removing
    the one leaving it, and swapping the excluded centre:

        sigma2_{i+1} = sigma2_i + (z2_{i+1+m} - z2_{i-m} + z2_i - z2_{i+1}) / (2m)
    """
    series.check_half_window(m)
    z = series.z2
    c = series.pad
    N = series.N

    first = (z[c - m:c].sum() + z[c + 1:c + m + 1].sum()) / (2 * m)
    centres = np.arange(c, c + N - 1)
    steps = (z[centres + 1 + m] - z[centres - m] + z[centres] - z[centres + 1]) / (2 * m)
    return first + np.concatenate(([0.0], np.cumsum(steps)))


def window_errors(series: ResidualSeries, m: int) -> np.ndarray:
    """
    Errors e_i = sigma2_i(m) - z2_i by their own sliding recursion:

        e_{i+1} = e_i + (z2_{i+1+m} - z2_{i-m}) / (2m) + (1 + 1/(2m)) (z2_i - z2_{i+1})
    """
    series.check_half_window(m)
    z = series.z2
    c = series.pad
    N = series.N

    first = (z[c - m:c].sum() + z[c + 1:c + m + 1].sum()) / (2 * m) - z[c]
    centres = np.arange(c, c + N - 1)
    steps = (
        (z[centres + 1 + m] - z[centres - m]) / (2 * m)
        + (1.0 + 1.0 / (2 * m)) * (z[centres] - z[centres + 1])
    )
    return first + np.concatenate(([0.0], np.cumsum(steps)))


def window_mse(series: ResidualSeries, m: int) -> float:
    """E(m) = (1/N) sum_i e_i^2 in O(N)."""
    errors = window_errors(series, m)
    return float(np.mean(errors ** 2))


def window_mse_profile(series: ResidualSeries) -> np.ndarray:
    """
    E(m) for every m = 1..max_half_window at once.

    Uses prefix sums of the padded series, so the whole profile costs
    O(N * m_max) vectorised work instead of m_max Python-level passes.

    Returns:
    --------
    np.ndarray: profile[m - 1] = E(m)
    """
    z = series.z2
    c = series.pad
    N = series.N
    m_values = np.arange(1, series.max_half_window + 1)

    prefix = np.concatenate(([0.0], np.cumsum(z)))
    centres = np.arange(c, c + N)
    # Window [i - m, i + m] inclusive, as a difference of prefix sums
    upper = prefix[centres[None, :] + m_values[:, None] + 1]
    lower = prefix[centres[None, :] - m_values[:, None]]
    core = z[centres]
    estimates = (upper - lower - core[None, :]) / (2.0 * m_values[:, None])
    return np.mean((estimates - core[None, :]) ** 2, axis=1)


def optimal_half_window(series: ResidualSeries) -> int:
    """
    Full search for the MSE-optimal half window over 1..floor(N/2).

    Ties (within a relative 1e-12) resolve to the smallest m.
    """
    profile = window_mse_profile(series)
    best = profile.min()
    threshold = best + _TIE_TOLERANCE * max(1.0, abs(best))
    m_dot = int(np.flatnonzero(profile <= threshold)[0]) + 1
    logger.debug("optimal half window %d (E=%.6g)", m_dot, profile[m_dot - 1])
    return m_dot
