"""Natural trend filtering: trend filtering over discrete natural splines.

For k = 2m - 1 the boundary constraints

    theta_{1:m}       = P_1 theta_{(m+1):(k+1)}
    theta_{(n-m+1):n} = P_2 theta_{(n-k):(n-m)}

ask the first and last m values to continue the degree m - 1 polynomial
interpolating the m values next to them. They are eliminated with
theta = E phi, phi = theta_{(m+1):(n-m)}, and ADMM runs on phi.
"""

from __future__ import annotations

import logging
import warnings

import numpy as np
import scipy.sparse as sp

from ..basis.operators import discrete_deriv_sparse, weighted_deriv_sparse
from ..dbsplines.natural import half_degree, natural_boundary_residual
from ..divided.newton import lagrange_matrix
from ..grid.design import DesignGrid
from ..utils.config import DEFAULT_NUMERICS, NumericsConfig
from ..utils.errors import ConvergenceWarning, DomainError
from ..utils.logs import kv
from .config import FitResult, SolverConfig
from .trend_filter import _spd_factor, admm_certificate, admm_core, fused_differences, kkt_residual, tf_objective

logger = logging.getLogger(__name__)


def natural_elimination(grid: DesignGrid, k: int) -> sp.csr_matrix:
    """n x (n - 2m) matrix E with theta = E theta_{(m+1):(n-m)} on the constraint set."""
    m = half_degree(k)
    n, pts = grid.n, grid.points
    if n < 2 * k + 2:
        raise DomainError(f"natural trend filtering of degree {k} needs n >= {2 * k + 2}, got {n}")
    p = n - 2 * m
    E = sp.lil_matrix((n, p))
    E[m: n - m, :] = sp.identity(p)
    E[:m, :m] = lagrange_matrix(pts[m: 2 * m], pts[:m])
    E[n - m:, p - m:] = lagrange_matrix(pts[n - k - 1: n - m], pts[n - m:])
    return E.tocsr()


def natural_constraint_residual(theta, grid: DesignGrid, k: int) -> float:
    """Largest violation of the two polynomial-continuation constraints."""
    m = half_degree(k)
    theta = np.asarray(theta, dtype=np.float64)
    pts, n = grid.points, grid.n
    left = lagrange_matrix(pts[m: 2 * m], pts[:m]) @ theta[m: 2 * m]
    right = lagrange_matrix(pts[n - k - 1: n - m], pts[n - m:]) @ theta[n - k - 1: n - m]
    return float(max(np.abs(theta[:m] - left).max(), np.abs(theta[n - m:] - right).max()))


def natural_trend_filter(y, grid: DesignGrid, k: int, cfg: SolverConfig | None = None,
                         numerics: NumericsConfig = DEFAULT_NUMERICS) -> FitResult:
    """Trend filtering of odd degree k restricted to discrete natural splines.

    lam = 0 gives the least squares projection of y onto the constraint set.
    No active-set polish is applied; the fit is the ADMM iterate mapped back
    through E, so the constraints hold to rounding.
    """
    cfg = cfg or SolverConfig()
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size != grid.n:
        raise DomainError(f"y has length {y.size}, expected {grid.n}")
    E = natural_elimination(grid, k)
    C = weighted_deriv_sparse(grid, k + 1)
    lam = float(cfg.lam)

    if lam == 0:
        phi = _spd_factor(E.T @ E, "LS").solve(E.T @ y)
        theta = E @ phi
        objective, penalty = tf_objective(y, theta, grid, k, 0.0)
        state_iters, converged, r_norm, s_norm, rho = 0, True, 0.0, 0.0, float("nan")
        active = signs = np.zeros(0, dtype=np.int64)
        kkt = float(np.abs(E.T @ (y - theta)).max())
    else:
        state = admm_core(y, E, discrete_deriv_sparse(grid, k), lam, cfg, tag="ADMM_NATURAL")
        theta = E @ state.beta
        objective, penalty = tf_objective(y, theta, grid, k, lam)
        active, signs = fused_differences(state.z, numerics)
        kkt = kkt_residual(y, theta, C, lam, active, signs, X=E, g=admm_certificate(state, lam))
        state_iters, converged, r_norm, s_norm, rho = state.iters, state.converged, state.r_norm, state.s_norm, state.rho
        if not converged:
            warnings.warn(f"ADMM did not converge within max_iter={cfg.max_iter} (r_norm={r_norm:.3e})", ConvergenceWarning)

    constraint = natural_constraint_residual(theta, grid, k)
    boundary = natural_boundary_residual(theta, grid, k)
    logger.info(kv("NATURAL_TF", n=grid.n, k=k, lam=lam, constraint=constraint, boundary=boundary))
    return FitResult(
        theta_hat=theta, objective=objective, penalty=penalty, active_set=active, kkt_residual=kkt,
        iters=state_iters, method="ntf", lam=lam, converged=converged,
        df=float(max(active.size, half_degree(k))), r_norm=r_norm, s_norm=s_norm,
        extras={"signs": signs, "degree": k, "rho": rho, "constraint_residual": constraint,
                "boundary_residual": boundary},
    )
