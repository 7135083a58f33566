"""
Active-set solver for the tap-weight quadratic program.

    minimise    w'Hw - 2f'w
    subject to  w_1 >= w_2 >= ... >= w_m >= 0,   sum(w) = 1/2

Writing w_k = v_k + v_{k+1} + ... + v_m (w = T v with T upper triangular
ones) turns monotonicity and non-negativity into v >= 0 and normality
into sum_j j * v_j = 1/2. In v the problem is

    minimise    1/2 v'Gv + g'v,   G = 2 T'HT,  g = -2 T'f
    subject to  v >= 0,  a'v = 1/2,  a = (1, ..., m)

which a primal active-set method solves from the feasible start
v = (0, ..., 0, 1/(2m)), the equal-weight window.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import InfeasibleWeightsError, QpConvergenceError, QpProblemError
from ..estimation.weighted_window import FEASIBILITY_TOLERANCE, TapWeights, quadratic_objective

logger = logging.getLogger(__name__)

# Tikhonov factor applied to H when a working face is singular
REGULARIZATION = 1e-10

# Active-set changes allowed per unknown
ITERATIONS_PER_UNKNOWN = 10

# Condition number above which a face counts as singular
_SINGULAR_CONDITION = 1e12


@dataclass
class QpProblem:
    """
    One tap-weight quadratic program.

    Attributes:
    -----------
    H: m x m symmetric positive-semidefinite matrix
    f: Length-m linear term
    """
    H: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=float)
        self.f = np.asarray(self.f, dtype=float).reshape(-1)
        m = self.f.size
        if m < 1 or self.H.shape != (m, m):
            raise QpProblemError(f"H must be {m} x {m} to match f, got {self.H.shape}")
        if not np.allclose(self.H, self.H.T, rtol=0.0, atol=1e-9 * max(1.0, np.abs(self.H).max())):
            raise QpProblemError("H must be symmetric")

    @property
    def m(self) -> int:
        return self.f.size

    @property
    def scale(self) -> float:
        """Magnitude used to normalise tolerances and residuals."""
        return max(1.0, float(np.abs(self.H).max()), float(np.abs(self.f).max()))

    def objective(self, w: np.ndarray) -> float:
        return quadratic_objective(self.H, self.f, w)


def _cumulative_matrix(m: int) -> np.ndarray:
    return np.triu(np.ones((m, m)))


def _to_increments(w: np.ndarray) -> np.ndarray:
    # v_j = w_j - w_{j+1}, with w_{m+1} = 0
    return w - np.append(w[1:], 0.0)


def _to_weights(v: np.ndarray) -> np.ndarray:
    return np.cumsum(v[::-1])[::-1]


def _reduced_problem(H: np.ndarray, f: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    T = _cumulative_matrix(f.size)
    return 2.0 * T.T @ H @ T, -2.0 * T.T @ f


def _solve_face(G: np.ndarray, g: np.ndarray, a: np.ndarray, free: np.ndarray,
                G_regularized: np.ndarray) -> Tuple[np.ndarray, float]:
    # Minimise over the free variables with the others pinned at 0:
    #   [G_FF  -a_F] [v_F]   [-g_F]
    #   [a_F'   0  ] [nu ] = [ 1/2]
    size = free.size
    a_free = a[free]
    rhs = np.append(-g[free], 0.5)
    for G_face in (G, G_regularized):
        kkt = np.zeros((size + 1, size + 1))
        kkt[:size, :size] = G_face[np.ix_(free, free)]
        kkt[:size, size] = -a_free
        kkt[size, :size] = a_free
        if np.linalg.cond(kkt) < _SINGULAR_CONDITION:
            solution = np.linalg.solve(kkt, rhs)
            return solution[:size], float(solution[size])
    # Still singular after regularisation: least-squares point of the face
    solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    return solution[:size], float(solution[size])


def solve(problem: QpProblem) -> TapWeights:
    """
    Optimal tap weights by a primal active-set method.

    Parameters:
    -----------
    problem: The quadratic program

    Returns:
    --------
    TapWeights: non-increasing, non-negative taps summing to 1/2, never
        worse than the equal-weight window

    Raises:
    -------
    QpConvergenceError: if more than 10 * m active-set changes are needed
    """
    m = problem.m
    if m == 1:
        return TapWeights(m=1, w=np.array([0.5]))

    G, g = _reduced_problem(problem.H, problem.f)
    trace = float(np.trace(problem.H))
    H_regularized = problem.H + REGULARIZATION * max(trace, 1.0) * np.eye(m)
    G_regularized, _ = _reduced_problem(H_regularized, problem.f)

    a = np.arange(1, m + 1, dtype=float)
    v = np.zeros(m)
    v[-1] = 1.0 / (2 * m)
    working = np.ones(m, dtype=bool)
    working[-1] = False

    step_tolerance = 1e-14
    multiplier_tolerance = 1e-10 * problem.scale
    max_changes = ITERATIONS_PER_UNKNOWN * m

    for _ in range(max_changes + 1):
        free = np.flatnonzero(~working)
        target, nu = _solve_face(G, g, a, free, G_regularized)
        step = target - v[free]

        if np.max(np.abs(step)) <= step_tolerance:
            # Stationary on this face: check the multipliers of the pinned variables
            pinned = np.flatnonzero(working)
            if pinned.size == 0:
                break
            multipliers = (G @ v + g - nu * a)[pinned]
            if multipliers.min() >= -multiplier_tolerance:
                break
            release = pinned[int(np.argmin(multipliers))]
            working[release] = False
            logger.debug("QP: release v_%d (multiplier %.3g)", release + 1, multipliers.min())
            continue

        # Longest feasible step towards the face minimiser
        shrinking = step < 0
        ratios = np.full(free.size, np.inf)
        ratios[shrinking] = -v[free][shrinking] / step[shrinking]
        blocking = int(np.argmin(ratios))
        alpha = min(1.0, float(ratios[blocking]))
        v[free] += alpha * step
        if alpha < 1.0:
            index = free[blocking]
            v[index] = 0.0
            working[index] = True
            logger.debug("QP: pin v_%d after step %.3g", index + 1, alpha)
    else:
        raise QpConvergenceError(f"active-set QP did not converge within {max_changes} changes (m={m})")

    v = np.maximum(v, 0.0)
    v *= 0.5 / float(a @ v)
    weights = TapWeights(m=m, w=_to_weights(v))

    # Regularised faces can leave the true objective a hair above the start
    equal = TapWeights.equal(m)
    if problem.objective(weights.w) > problem.objective(equal.w):
        return equal
    return weights


def kkt_residual(problem: QpProblem, w: np.ndarray) -> float:
    """
    Certify a candidate solution.

    Multipliers are recovered by least squares on the variables with
    v_j > 0; the result is the largest of the stationarity, dual
    feasibility, complementary slackness and primal feasibility
    violations, normalised by max(1, max|H|, max|f|).

    Raises:
    -------
    InfeasibleWeightsError: if w violates the constraints by more than 1e-8
    """
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.size != problem.m:
        raise InfeasibleWeightsError(f"expected {problem.m} weights, got {w.size}")
    violation = TapWeights(m=problem.m, w=w).violation()
    if violation > FEASIBILITY_TOLERANCE:
        raise InfeasibleWeightsError(f"weights violate the constraints by {violation:.3g}")

    G, g = _reduced_problem(problem.H, problem.f)
    a = np.arange(1, problem.m + 1, dtype=float)
    v = _to_increments(w)
    gradient = G @ v + g

    positive = v > FEASIBILITY_TOLERANCE
    if positive.any():
        nu = float(np.linalg.lstsq(a[positive, None], gradient[positive], rcond=None)[0][0])
    else:
        nu = 0.0
    multipliers = gradient - nu * a

    stationarity = np.abs(multipliers[positive]).max(initial=0.0)
    dual = np.maximum(-multipliers[~positive], 0.0).max(initial=0.0)
    slackness = np.abs(multipliers * np.maximum(v, 0.0)).max(initial=0.0)
    return max(stationarity, dual, slackness) / problem.scale + violation
