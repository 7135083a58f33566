"""
Tests for the active-set tap-weight solver.
"""

import numpy as np
import pytest

from src.errors import InfeasibleWeightsError, QpConvergenceError, QpProblemError
from src.estimation.residuals import ResidualSeries
from src.estimation.weighted_window import TapWeights, build_h_f, build_phi
from src.optimization import active_set
from src.optimization.active_set import QpProblem, kkt_residual, solve

# Test data
GRID_UNITS = {2: 500, 3: 500, 4: 200}
GRID_INSTANCES = {2: 50, 3: 50, 4: 20}
KKT_TOLERANCE = 1e-6


def compositions(m, units):
    """Non-negative (n_1..n_m) with sum_j j * n_j = units."""
    if m == 1:
        yield (units,)
        return
    for last in range(units // m + 1):
        for rest in compositions(m - 1, units - m * last):
            yield rest + (last,)


def feasible_grid(m, units):
    """Every feasible weight vector whose increments are multiples of 0.5 / units."""
    increments = np.array(list(compositions(m, units)), dtype=float) * (0.5 / units)
    T = np.triu(np.ones((m, m)))
    return increments @ T.T


def objectives(H, f, W):
    """w'Hw - 2f'w for every row of W."""
    return np.einsum("pi,ij,pj->p", W, H, W) - 2.0 * W @ f


def random_problem(rng, m):
    """Positive-definite H and arbitrary f."""
    B = rng.standard_normal((m, m + 1))
    return QpProblem(H=B @ B.T, f=rng.standard_normal(m))


def test_single_tap():
    """m = 1 always yields w = 1/2."""
    weights = solve(QpProblem(H=[[3.0]], f=[-7.0]))
    assert weights.w.tolist() == [0.5]
    assert kkt_residual(QpProblem(H=[[3.0]], f=[-7.0]), weights.w) == pytest.approx(0.0, abs=1e-12)


def test_interior_example():
    """H = I, f = (0.3, 0.2) has the feasible unconstrained minimiser f."""
    problem = QpProblem(H=np.eye(2), f=[0.3, 0.2])
    weights = solve(problem)
    assert np.allclose(weights.w, [0.3, 0.2], atol=1e-12)
    assert kkt_residual(problem, weights.w) <= KKT_TOLERANCE


def test_monotonicity_constraint_binds():
    """An f favouring later taps is flattened to equal weights."""
    weights = solve(QpProblem(H=np.eye(2), f=[0.1, 0.4]))
    assert np.allclose(weights.w, [0.25, 0.25], atol=1e-12)


def test_linear_objective_picks_vertex():
    """With H = 0 the optimum is the vertex (1/2, 0, 0) for f = (1, 0, 0)."""
    problem = QpProblem(H=np.zeros((3, 3)), f=[1.0, 0.0, 0.0])
    weights = solve(problem)
    assert np.allclose(weights.w, [0.5, 0.0, 0.0], atol=1e-9)
    assert weights.is_feasible()


@pytest.mark.parametrize("m", [2, 3, 4])
def test_matches_grid_search(m):
    """The solver is never beaten by an exhaustive grid of feasible weights."""
    rng = np.random.default_rng(100 + m)
    grid = feasible_grid(m, GRID_UNITS[m])
    for _ in range(GRID_INSTANCES[m]):
        problem = random_problem(rng, m)
        weights = solve(problem)
        best_on_grid = objectives(problem.H, problem.f, grid).min()
        assert weights.is_feasible()
        assert problem.objective(weights.w) <= best_on_grid + 1e-9 * problem.scale
        assert kkt_residual(problem, weights.w) <= KKT_TOLERANCE


def test_residual_problems_satisfy_kkt(rng):
    """Problems built from residual series are solved to KKT tolerance."""
    for _ in range(20):
        z2 = (rng.standard_normal(256) * rng.choice([0.2, 1.0, 1.6], size=256)) ** 2
        series = ResidualSeries.from_core(z2)
        m = int(rng.integers(2, 12))
        H, f = build_h_f(build_phi(series, m), m)
        problem = QpProblem(H=H, f=f)
        weights = solve(problem)
        assert weights.is_feasible()
        assert np.all(np.diff(weights.w) <= 1e-12)
        assert weights.w.sum() == pytest.approx(0.5, abs=1e-12)
        assert problem.objective(weights.w) <= problem.objective(TapWeights.equal(m).w)
        assert kkt_residual(problem, weights.w) <= KKT_TOLERANCE


def test_scaling_invariance(rng):
    """Scaling H and f by c > 0 leaves the solution unchanged."""
    for _ in range(10):
        problem = random_problem(rng, 5)
        scaled = QpProblem(H=7.5 * problem.H, f=7.5 * problem.f)
        assert np.allclose(solve(problem).w, solve(scaled).w, atol=1e-8)


def test_singular_h_still_feasible():
    """A rank-one H from a constant series still yields feasible weights."""
    series = ResidualSeries.from_core(np.full(64, 0.5))
    H, f = build_h_f(build_phi(series, 6), 6)
    problem = QpProblem(H=H, f=f)
    weights = solve(problem)
    assert weights.is_feasible()
    assert problem.objective(weights.w) <= problem.objective(TapWeights.equal(6).w) + 1e-9 * problem.scale


def test_kkt_residual_flags_suboptimal_weights():
    """Equal weights are not optimal for H = I, f = (0.3, 0.2)."""
    problem = QpProblem(H=np.eye(2), f=[0.3, 0.2])
    assert kkt_residual(problem, [0.25, 0.25]) == pytest.approx(0.1)


def test_kkt_residual_rejects_infeasible_weights():
    """Infeasible candidates raise InfeasibleWeightsError."""
    problem = QpProblem(H=np.eye(2), f=[0.3, 0.2])
    with pytest.raises(InfeasibleWeightsError):
        kkt_residual(problem, [0.2, 0.3])
    with pytest.raises(InfeasibleWeightsError):
        kkt_residual(problem, [0.5])


def test_iteration_cap_raises(monkeypatch):
    """Exceeding the active-set change budget raises QpConvergenceError."""
    monkeypatch.setattr(active_set, "ITERATIONS_PER_UNKNOWN", 0)
    with pytest.raises(QpConvergenceError):
        solve(QpProblem(H=np.eye(2), f=[0.3, 0.2]))


def test_problem_validation():
    """Mismatched shapes and asymmetric H are refused."""
    with pytest.raises(QpProblemError):
        QpProblem(H=np.eye(3), f=[1.0, 2.0])
    with pytest.raises(QpProblemError):
        QpProblem(H=[[1.0, 2.0], [0.0, 1.0]], f=[1.0, 2.0])
