"""
Weighted-window estimation (W2SCAN).

The equal taps 1/(2m) of the sliding window are replaced by symmetric
taps w_1..w_m:

    sigma2_i(w) = sum_{k=1..m} w_k (z2_{i-k} + z2_{i+k})

The squared error sum_i (sigma2_i(w) - z2_i)^2 equals
w'Hw - 2f'w + sum_i z2_i^2, where H and f are assembled from the
(2m+1) x (2m+1) matrix phi_{k,l} = sum_i z2_{i+k} z2_{i+l}. The taps are
chosen by minimising w'Hw - 2f'w under non-negativity, monotonicity and
normality (sum w = 1/2) constraints.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import CodeSpecError
from .residuals import ResidualSeries

# Feasibility tolerance for tap weights
FEASIBILITY_TOLERANCE = 1e-8


@dataclass
class TapWeights:
    """
    Half of a symmetric, centre-excluded window.

    Attributes:
    -----------
    m: Half window size
    w: Taps w_1..w_m for offsets +/-1..+/-m
    """
    m: int
    w: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float)
        if self.m < 1 or self.w.shape != (self.m,):
            raise CodeSpecError(f"expected {self.m} tap weights, got shape {self.w.shape}")

    @classmethod
    def equal(cls, m: int) -> "TapWeights":
        """The sliding-window taps w_k = 1/(2m)."""
        return cls(m=m, w=np.full(m, 1.0 / (2 * m)))

    def violation(self) -> float:
        """Largest violation of non-negativity, monotonicity and normality."""
        worst = max(0.0, -float(self.w[-1]), abs(float(self.w.sum()) - 0.5))
        if self.m > 1:
            worst = max(worst, float(np.max(self.w[1:] - self.w[:-1])))
        return worst

    def is_feasible(self, tolerance: float = FEASIBILITY_TOLERANCE) -> bool:
        return self.violation() <= tolerance


def build_phi(series: ResidualSeries, m: int) -> np.ndarray:
    """
    phi_{k,l} = sum_{i=1..N} z2_{i+k} z2_{i+l} for -m <= k, l <= m.

    Row/column index k + m holds offset k. Built as A A' from the 2m+1
    shifted views of the padded series, which is O(N m^2).
    """
    series.check_half_window(m)
    shifted = np.stack([series.shifted(k) for k in range(-m, m + 1)])
    return shifted @ shifted.T


def build_h_f(phi: np.ndarray, m: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Assemble the quadratic-program data from phi.

    h_{k,l} = phi_{-k,-l} + phi_{-k,l} + phi_{k,-l} + phi_{k,l}
    f_k = phi_{k,0} + phi_{-k,0}, for k, l = 1..m
    """
    if phi.shape != (2 * m + 1, 2 * m + 1):
        raise CodeSpecError(f"phi must be {2 * m + 1} square for m={m}, got {phi.shape}")
    plus = m + np.arange(1, m + 1)
    minus = m - np.arange(1, m + 1)

    H = (
        phi[np.ix_(minus, minus)]
        + phi[np.ix_(minus, plus)]
        + phi[np.ix_(plus, minus)]
        + phi[np.ix_(plus, plus)]
    )
    f = phi[plus, m] + phi[minus, m]
    # Symmetric by construction; remove rounding asymmetry
    return 0.5 * (H + H.T), f


def weighted_estimates(series: ResidualSeries, weights: TapWeights) -> np.ndarray:
    """sigma2_i(w) = sum_k w_k (z2_{i-k} + z2_{i+k}) for every symbol."""
    series.check_half_window(weights.m)
    estimates = np.zeros(series.N)
    for k, tap in enumerate(weights.w, start=1):
        estimates += tap * (series.shifted(-k) + series.shifted(k))
    return estimates


def window_objective(series: ResidualSeries, weights: TapWeights) -> float:
    """Direct squared error sum_i (sigma2_i(w) - z2_i)^2."""
    return float(np.sum((weighted_estimates(series, weights) - series.core) ** 2))


def quadratic_objective(H: np.ndarray, f: np.ndarray, w: np.ndarray) -> float:
    """w'Hw - 2f'w, the squared error without its constant term."""
    w = np.asarray(w, dtype=float)
    return float(w @ H @ w - 2.0 * f @ w)
