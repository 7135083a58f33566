"""
Per-iteration channel-state estimator for SWSCAN and W2SCAN.

After each SCAN iteration the decoder hands over its bias probabilities;
the estimator turns them into squared residuals, searches the
MSE-optimal equal-weight half window, and returns new variance
estimates, either from the equal-weight window (SWSCAN) or from the
QP-optimised weighted window (W2SCAN).

Estimation works in transmission order, where neighbouring symbols
share a channel state; ChannelStateEstimator takes care of moving the
decoder's codeword-order vectors in and out of that order.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..coding.polar import CodeSpec, apply_tx_permutation, invert_tx_permutation
from ..decoding.llr import VAR_FLOOR
from ..errors import QpConvergenceError, SimConfigError
from ..optimization.active_set import QpProblem, solve
from .residuals import squared_residuals
from .sliding_window import optimal_half_window, window_mean_estimates
from .weighted_window import (
    TapWeights,
    build_h_f,
    build_phi,
    quadratic_objective,
    weighted_estimates,
)

logger = logging.getLogger(__name__)


class EstimatorKind(str, Enum):
    """Which window the estimator uses."""
    SWSCAN = "swscan"
    W2SCAN = "w2scan"


@dataclass
class EstimateReport:
    """
    Diagnostics of one estimator update.

    Attributes:
    -----------
    kind: Estimator kind
    m_dot: MSE-optimal half window of the equal-weight search
    m: Half window actually used
    weights: Tap weights used (equal weights for SWSCAN)
    qp_fallback: True when the QP failed and equal weights were used
    objective: w'Hw - 2f'w at the chosen weights (W2SCAN only)
    equal_objective: w'Hw - 2f'w at equal weights (W2SCAN only)
    """
    kind: EstimatorKind
    m_dot: int
    m: int
    weights: TapWeights
    qp_fallback: bool = False
    objective: Optional[float] = None
    equal_objective: Optional[float] = None

    @property
    def dominance_gap(self) -> float:
        """objective - equal_objective; never positive for a correct solver."""
        if self.objective is None or self.equal_objective is None:
            return 0.0
        return self.objective - self.equal_objective


def weighted_half_window(alpha: float, m_dot: int, N: int) -> int:
    """round(alpha * m_dot) clamped to [1, floor(N/2)] (halves round up)."""
    return int(min(max(np.floor(alpha * m_dot + 0.5), 1), N // 2))


def estimate_state(
    kind: EstimatorKind,
    alpha: float,
    y: np.ndarray,
    p: np.ndarray,
) -> Tuple[np.ndarray, EstimateReport]:
    """
    New variance estimates plus diagnostics.

    Parameters:
    -----------
    kind: SWSCAN or W2SCAN
    alpha: Window multiplier for W2SCAN (m = alpha * m_dot); ignored by SWSCAN
    y: Received samples in transmission order
    p: Bias probabilities in transmission order

    Returns:
    --------
    tuple: (variance estimates floored at VAR_FLOOR, EstimateReport)
    """
    kind = EstimatorKind(kind)
    if not alpha > 0:
        raise SimConfigError(f"window multiplier must be > 0, got {alpha}")

    series = squared_residuals(y, p)
    m_dot = optimal_half_window(series)

    if kind is EstimatorKind.SWSCAN:
        estimates = window_mean_estimates(series, m_dot)
        report = EstimateReport(kind=kind, m_dot=m_dot, m=m_dot, weights=TapWeights.equal(m_dot))
        return np.maximum(estimates, VAR_FLOOR), report

    m = weighted_half_window(alpha, m_dot, series.N)
    H, f = build_h_f(build_phi(series, m), m)
    equal = TapWeights.equal(m)
    fallback = False
    try:
        weights = solve(QpProblem(H=H, f=f))
    except QpConvergenceError as e:
        logger.warning("%s; falling back to equal weights", e)
        weights, fallback = equal, True

    report = EstimateReport(
        kind=kind,
        m_dot=m_dot,
        m=m,
        weights=weights,
        qp_fallback=fallback,
        objective=quadratic_objective(H, f, weights.w),
        equal_objective=quadratic_objective(H, f, equal.w),
    )
    return np.maximum(weighted_estimates(series, weights), VAR_FLOOR), report


def estimator_update(kind: EstimatorKind, alpha: float, y: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Variance estimates only; see estimate_state."""
    estimates, _ = estimate_state(kind, alpha, y, p)
    return estimates


@dataclass
class ChannelStateEstimator:
    """
    State-updater callback for one SCAN decode.

    The decoder calls the instance with bias probabilities in codeword
    order and receives variance estimates in codeword order. Every update
    is recorded in `reports`.
    """
    spec: CodeSpec
    y: np.ndarray
    kind: EstimatorKind = EstimatorKind.SWSCAN
    alpha: float = 1.0
    reports: List[EstimateReport] = field(default_factory=list)

    def __post_init__(self):
        self.kind = EstimatorKind(self.kind)
        self._y_tx = apply_tx_permutation(self.spec, np.asarray(self.y, dtype=float))

    def __call__(self, p: np.ndarray) -> np.ndarray:
        p_tx = apply_tx_permutation(self.spec, p)
        estimates, report = estimate_state(self.kind, self.alpha, self._y_tx, p_tx)
        self.reports.append(report)
        logger.debug(
            "%s update %d: m_dot=%d m=%d fallback=%s",
            self.kind.value, len(self.reports), report.m_dot, report.m, report.qp_fallback,
        )
        return invert_tx_permutation(self.spec, estimates)

    @property
    def qp_fallbacks(self) -> int:
        return sum(report.qp_fallback for report in self.reports)

    @property
    def worst_dominance_gap(self) -> float:
        return max((report.dominance_gap for report in self.reports), default=0.0)
