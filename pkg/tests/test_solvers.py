import numpy as np
import pytest
import scipy.sparse as sp
from scipy.linalg import solve_triangular
from scipy.optimize import lsq_linear

from src.basis import discrete_deriv_sparse, weighted_deriv_sparse
from src.data import heterogeneous_truth
from src.functionals import k_matrix_inv
from src.grid import DesignGrid
from src.solvers import (
    SolverConfig,
    bw_filter,
    natural_constraint_residual,
    natural_elimination,
    natural_trend_filter,
    refine_polish,
    smoothing_spline,
    ss_bw_distance_check,
    tf_objective,
    trend_filter,
    tv_denoise_1d,
    tv_objective,
)
from src.utils.errors import ConvergenceWarning, DomainError


def _noisy(n=40, seed=0, design="random"):
    rng = np.random.default_rng(seed)
    grid = DesignGrid.random(n, rng) if design == "random" else DesignGrid.uniform(n)
    truth = heterogeneous_truth(grid.points)
    return truth + 0.1 * rng.standard_normal(n), grid, truth


def _dual_oracle(y, C, lam):
    """Solve min_{|u| <= lam} 1/2 ||y - C^T u||^2 and return y - C^T u."""
    Ct = C.T.toarray()
    res = lsq_linear(Ct, y, bounds=(-lam, lam), method="bvls", tol=1e-14)
    return y - Ct @ res.x


# --- exact TV denoising ---

def test_tv_denoise_two_points():
    assert np.allclose(tv_denoise_1d([0.0, 1.0], 0.25), [0.25, 0.75])
    assert np.allclose(tv_denoise_1d([0.0, 1.0], 0.6), [0.5, 0.5])


def test_tv_denoise_large_gamma_returns_mean():
    b = np.array([3.0, -1.0, 4.0, 1.0, -5.0])
    assert np.allclose(tv_denoise_1d(b, 100.0), b.mean())


def test_tv_denoise_trivial_inputs():
    b = np.array([1.0, 2.0, 0.5])
    assert np.array_equal(tv_denoise_1d(b, 0.0), b)
    assert np.array_equal(tv_denoise_1d([7.0], 3.0), [7.0])
    with pytest.raises(DomainError):
        tv_denoise_1d(b, -1.0)


def _tv_oracle(b, gamma):
    n = b.size
    D = sp.diags([-np.ones(n - 1), np.ones(n - 1)], [0, 1], shape=(n - 1, n))
    return _dual_oracle(b, D, gamma)


def test_tv_denoise_pools_last_point_with_neighbour():
    z = tv_denoise_1d([-0.45, 0.78, 0.19], 0.36)
    assert np.allclose(z, [-0.09, 0.305, 0.305], atol=1e-12)


def test_tv_denoise_matches_dual_oracle_on_random_inputs():
    rng = np.random.default_rng(2)
    for _ in range(300):
        n = int(rng.integers(2, 15))
        b = rng.standard_normal(n) if rng.random() < 0.5 else np.cumsum(rng.standard_normal(n))
        gamma = float(10.0 ** rng.uniform(-2, 0.5))
        z = tv_denoise_1d(b, gamma)
        oracle = _tv_oracle(b, gamma)
        assert np.allclose(z, oracle, atol=1e-7)
        assert tv_objective(z, b, gamma) <= tv_objective(oracle, b, gamma) + 1e-10


# --- configuration ---

def test_solver_config_mapping_and_overrides():
    cfg = SolverConfig.from_mapping({"lambda": 0.5, "rho": None, "unknown": 3})
    assert cfg.lam == 0.5
    assert cfg.effective_rho == 0.5
    cfg = cfg.with_overrides(rho=2.0, max_iter=None)
    assert cfg.effective_rho == 2.0 and cfg.max_iter == 20000
    assert SolverConfig(lam=0.0).effective_rho == 1.0
    with pytest.raises(DomainError):
        SolverConfig(lam=-1.0)
    with pytest.raises(DomainError):
        SolverConfig(mode="fast")


@pytest.mark.parametrize("bad", [{"max_expansions": -1}, {"warm_iters": 0}, {"rho_period": 0}])
def test_solver_config_rejects_bad_working_set_settings(bad):
    with pytest.raises(DomainError):
        SolverConfig(**bad)


# --- trend filtering ---

def _lambda_max(y, C):
    """Smallest lam whose fit is the polynomial projection: ||(C C^T)^{-1} C y||_inf."""
    C = C.toarray()
    return float(np.abs(np.linalg.solve(C @ C.T, C @ y)).max())


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("frac", [0.05, 0.3, 0.7])
def test_trend_filter_matches_dual_oracle(k, frac):
    for seed in (1, 2):
        y, grid, _ = _noisy(18, seed=10 * k + seed)
        C = weighted_deriv_sparse(grid, k + 1)
        lam = frac * _lambda_max(y, C)
        fit = trend_filter(y, grid, k, SolverConfig(lam=lam))
        oracle = _dual_oracle(y, C, lam)
        best = tf_objective(y, oracle, grid, k, lam)[0]
        assert fit.objective == pytest.approx(best, rel=1e-6)
        assert np.allclose(fit.theta_hat, oracle, atol=1e-4)
        assert fit.kkt_residual <= 1e-5


def test_refine_polish_recovers_a_missing_knot():
    y, grid, _ = _noisy(18, seed=3)
    k = 1
    C = weighted_deriv_sparse(grid, k + 1)
    lam = 0.3 * _lambda_max(y, C)
    oracle = _dual_oracle(y, C, lam)
    jumps = C @ oracle
    active = np.flatnonzero(np.abs(jumps) > 1e-6 * np.abs(jumps).max())
    signs = np.sign(jumps[active])
    theta, got, _ = refine_polish(y, grid, k, lam, active[1:], signs[1:])
    assert np.allclose(theta, oracle, atol=1e-6)
    assert set(got.tolist()) == set(active.tolist())


def test_zero_lambda_returns_data():
    y, grid, _ = _noisy(20)
    fit = trend_filter(y, grid, 1, SolverConfig(lam=0.0))
    assert np.array_equal(fit.theta_hat, y)
    assert fit.iters == 0 and fit.df == grid.n


def test_huge_lambda_gives_polynomial_fit():
    y, grid, _ = _noisy(30, seed=4)
    fit = trend_filter(y, grid, 1, SolverConfig(lam=10.0))
    line = np.polyval(np.polyfit(grid.points, y, 1), grid.points)
    assert np.allclose(fit.theta_hat, line, atol=1e-6)
    assert fit.n_active == 0


def test_polished_fit_is_spline_with_active_knots():
    y, grid, _ = _noisy(60, seed=5)
    k, lam = 1, 5e-3
    fit = trend_filter(y, grid, k, SolverConfig(lam=lam))
    assert fit.extras["polished"]
    C = weighted_deriv_sparse(grid, k + 1)
    jumps = np.flatnonzero(np.abs(C @ fit.theta_hat) > 1e-8 * max(1.0, np.abs(C @ fit.theta_hat).max()))
    assert set(jumps.tolist()) <= set(fit.active_set.tolist())


def test_working_set_mode_agrees_with_standard_mode():
    y, grid, _ = _noisy(60, seed=6)
    lam = 2e-5
    std = trend_filter(y, grid, 2, SolverConfig(lam=lam))
    dbs = trend_filter(y, grid, 2, SolverConfig(lam=lam, mode="dbspline"))
    assert dbs.objective == pytest.approx(std.objective, rel=1e-5)


def test_trend_filter_input_errors():
    y, grid, _ = _noisy(20)
    with pytest.raises(DomainError):
        trend_filter(y[:-1], grid, 1)
    with pytest.raises(DomainError):
        trend_filter(y, grid, grid.n - 1)


def test_iteration_cap_warns_and_flags():
    y, grid, _ = _noisy(40, seed=7)
    with pytest.warns(ConvergenceWarning):
        fit = trend_filter(y, grid, 2, SolverConfig(lam=1e-4, max_iter=2, polish=False))
    assert not fit.converged
    assert fit.iters == 2


# --- natural trend filtering ---

def test_natural_elimination_satisfies_constraints():
    grid = DesignGrid.random(20, np.random.default_rng(8))
    E = natural_elimination(grid, 3)
    assert E.shape == (20, 16)
    phi = np.random.default_rng(9).standard_normal(16)
    assert natural_constraint_residual(E @ phi, grid, 3) <= 1e-10


def test_natural_trend_filter_respects_boundary_constraints():
    y, grid, _ = _noisy(50, seed=10)
    lam = 1e-5
    fit = natural_trend_filter(y, grid, 3, SolverConfig(lam=lam))
    scale = max(1.0, np.abs(fit.theta_hat).max())
    assert fit.extras["constraint_residual"] <= 1e-10 * scale
    free = trend_filter(y, grid, 3, SolverConfig(lam=lam))
    assert fit.objective >= free.objective * (1.0 - 1e-6)


def _natural_oracle(y, grid, k, lam):
    """Fit from the dual of min_phi 1/2 ||y - E phi||^2 + lam ||C E phi||_1."""
    E = natural_elimination(grid, k).toarray()
    A = weighted_deriv_sparse(grid, k + 1).toarray() @ E
    G = E.T @ E
    L = np.linalg.cholesky(G)
    M = solve_triangular(L, A.T, lower=True)
    rhs = solve_triangular(L, E.T @ y, lower=True)
    u = lsq_linear(M, rhs, bounds=(-lam, lam), method="bvls", tol=1e-14).x
    return E @ np.linalg.solve(G, E.T @ y - A.T @ u)


@pytest.mark.parametrize("lam", [1e-2, 1e-5])
def test_natural_trend_filter_matches_dual_oracle(lam):
    y, grid, _ = _noisy(30, seed=16)
    fit = natural_trend_filter(y, grid, 3, SolverConfig(lam=lam))
    assert fit.converged
    assert fit.kkt_residual <= 1e-3
    assert fit.extras["boundary_residual"] <= 1e-8
    assert np.allclose(fit.theta_hat, _natural_oracle(y, grid, 3, lam), atol=1e-4)


def test_natural_trend_filter_zero_lambda_is_constrained_projection():
    y, grid, _ = _noisy(30, seed=11)
    fit = natural_trend_filter(y, grid, 1, SolverConfig(lam=0.0))
    assert fit.kkt_residual <= 1e-9
    # degree 1: one value at each end continues its neighbour
    assert fit.theta_hat[0] == pytest.approx(fit.theta_hat[1])
    assert fit.theta_hat[-1] == pytest.approx(fit.theta_hat[-2])


def test_natural_trend_filter_needs_odd_degree():
    y, grid, _ = _noisy(30)
    with pytest.raises(DomainError):
        natural_trend_filter(y, grid, 2)


# --- linear smoothers ---

def test_linear_bw_equals_linear_smoothing_spline():
    y, grid, _ = _noisy(40, seed=12)
    bw = bw_filter(y, grid, 1, 0.01)
    ss = smoothing_spline(y, grid, 1, 0.01)
    assert np.allclose(bw.theta_hat, ss.theta_hat, atol=1e-10)
    assert bw.objective == pytest.approx(ss.objective)


def test_bw_filter_matches_dense_solve():
    y, grid, _ = _noisy(30, seed=13, design="uniform")
    D = discrete_deriv_sparse(grid, 2).toarray()
    for weighted in (True, False):
        w = (grid.points[2:] - grid.points[:-2]) / 2 if weighted else np.ones(grid.n - 2)
        expected = np.linalg.solve(np.eye(grid.n) + 1e-4 * D.T @ np.diag(w) @ D, y)
        fit = bw_filter(y, grid, 2, 1e-4, weighted=weighted)
        assert np.allclose(fit.theta_hat, expected, atol=1e-9)
        assert fit.method == ("bw" if weighted else "bw-unweighted")


def test_smoothing_spline_matches_dense_solve():
    y, grid, _ = _noisy(30, seed=14)
    D = discrete_deriv_sparse(grid, 2).toarray()
    K = np.linalg.inv(k_matrix_inv(grid, 2).to_dense())
    lam = 1e-5
    expected = np.linalg.solve(np.eye(grid.n) + lam * D.T @ K @ D, y)
    fit = smoothing_spline(y, grid, 2, lam)
    assert np.allclose(fit.theta_hat, expected, atol=1e-8)
    assert fit.objective == pytest.approx(0.5 * np.sum((y - expected) ** 2) + 0.5 * lam * (D @ expected) @ K @ (D @ expected))


def test_smoother_degrees_of_freedom():
    y, grid, _ = _noisy(30, seed=15)
    assert bw_filter(y, grid, 2, 0.0).df == pytest.approx(grid.n)
    dfs = [bw_filter(y, grid, 2, lam).df for lam in (1e-6, 1e-4, 1e-2)]
    assert dfs[0] > dfs[1] > dfs[2] >= 2.0 - 1e-9
    assert 2.0 - 1e-9 <= smoothing_spline(y, grid, 2, 1e-4).df <= grid.n


@pytest.mark.parametrize("variant", ["bound", "equal"])
def test_smoothing_spline_and_bw_filter_stay_close(variant):
    for seed in range(5):
        y, grid, _ = _noisy(100, seed=seed)
        lam_a = 10.0 ** np.random.default_rng(seed).uniform(-7, -3)
        lam_b = 3.0 * lam_a if variant == "bound" else None
        lhs, rhs = ss_bw_distance_check(y, grid, lam_a, lam_b, variant=variant)
        assert lhs <= rhs + 1e-9 * max(1.0, rhs)


def test_distance_check_validates_lambdas():
    y, grid, _ = _noisy(20)
    with pytest.raises(DomainError):
        ss_bw_distance_check(y, grid, 1e-3, 1e-3)
    with pytest.raises(DomainError):
        ss_bw_distance_check(y, grid, 1e-3, 2e-3, variant="equal")
