"""Trend filtering by ADMM on the split z = D^k theta.

The problem is

    minimize_theta  1/2 ||y - theta||^2 + lam ||C^{k+1} theta||_1,

with C^{k+1} = W^{k+1} D^{k+1}. Since C^{k+1} = Dbar D^k, the penalty is the
one-dimensional total variation of z = D^k theta, so the z-update is an exact
TV denoising step and the theta-update a banded solve with a factor that is
computed once. The same core also runs on a reparametrization theta = X beta
(DB-spline columns for the working-set mode, the natural-spline elimination
for natural trend filtering).
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from ..basis.operators import discrete_deriv_sparse, weighted_deriv_sparse
from ..dbsplines.projection import project_ls
from ..dbsplines.sparse import dbs_values_sparse
from ..grid.banded import BandedCholesky, BandedMatrix
from ..grid.design import DesignGrid
from ..utils.config import DEFAULT_NUMERICS, NumericsConfig
from ..utils.errors import ConvergenceWarning, DomainError, FactorizationError
from ..utils.logs import kv
from .config import FitResult, SolverConfig
from .tvd import tv_denoise_1d

logger = logging.getLogger(__name__)

LOG_EVERY = 500
RHO_BALANCE = 10.0
RHO_SCALE_MAX = 100.0
POLISH_ROUNDS = 4


@dataclass
class AdmmState:
    beta: np.ndarray
    z: np.ndarray
    u: np.ndarray
    rho: float
    iters: int = 0
    r_norm: float = np.inf
    s_norm: float = np.inf
    converged: bool = False


def _spd_factor(G: sp.spmatrix, route: str) -> BandedCholesky:
    G = sp.coo_matrix(0.5 * (G + G.T))
    return BandedCholesky(BandedMatrix.from_sparse(G), route=route)


def _rho_multiplier(r_scaled: float, s_scaled: float) -> float:
    """Factor for rho from tolerance-scaled primal and dual residuals.

    sqrt(r / s) clipped to [1/RHO_SCALE_MAX, RHO_SCALE_MAX]; 1.0 while the
    two residuals are within a factor RHO_BALANCE of each other.
    """
    if s_scaled <= 0.0:
        return RHO_SCALE_MAX if r_scaled > 0.0 else 1.0
    ratio = r_scaled / s_scaled
    if 1.0 / RHO_BALANCE <= ratio <= RHO_BALANCE:
        return 1.0
    return float(np.clip(np.sqrt(ratio), 1.0 / RHO_SCALE_MAX, RHO_SCALE_MAX))


def admm_core(y: np.ndarray, X: sp.csr_matrix, Dk: sp.csr_matrix, lam: float,
              cfg: SolverConfig, tag: str = "ADMM") -> AdmmState:
    """ADMM for 1/2 ||y - X beta||^2 + lam ||Dbar Dk X beta||_1 with z = Dk X beta.

    Updates, with scaled dual u:
      beta = (X^T X + rho A^T A)^{-1} (X^T y + rho A^T (z + u)),  A = Dk X
      z    = tv_denoise_1d(A beta - u, lam / rho)
      u    = u + z - A beta

    With ``cfg.auto_rho`` the residuals are rebalanced: a change of rho by a
    factor t rescales u by 1/t and refactors the beta system.
    """
    rho = cfg.effective_rho
    A = (Dk @ X).tocsr()
    XtX, AtA = X.T @ X, A.T @ A
    Xty = X.T @ y
    beta = _spd_factor(XtX, "LS").solve(Xty)
    chol = _spd_factor(XtX + rho * AtA, "ADMM")
    z = A @ beta
    state = AdmmState(beta=beta, z=z, u=np.zeros_like(z), rho=rho)
    sqrt_p, sqrt_q = np.sqrt(z.size), np.sqrt(beta.size)
    adapt_until = cfg.max_iter // 2 if cfg.auto_rho else 0
    for it in range(1, cfg.max_iter + 1):
        state.beta = chol.solve(Xty + rho * (A.T @ (state.z + state.u)))
        Ab = A @ state.beta
        z_old = state.z
        state.z = tv_denoise_1d(Ab - state.u, lam / rho)
        state.u = state.u + state.z - Ab
        state.r_norm = float(np.linalg.norm(state.z - Ab))
        state.s_norm = float(rho * np.linalg.norm(A.T @ (state.z - z_old)))
        eps_pri = sqrt_p * cfg.tol_primal + cfg.rel_tol * max(np.linalg.norm(Ab), np.linalg.norm(state.z))
        eps_dual = sqrt_q * cfg.tol_dual + cfg.rel_tol * rho * np.linalg.norm(A.T @ state.u)
        state.iters = it
        if it % LOG_EVERY == 0:
            logger.debug(kv(tag, iter=it, rho=rho, r_norm=state.r_norm, s_norm=state.s_norm))
        if state.r_norm <= eps_pri and state.s_norm <= eps_dual:
            state.converged = True
            break
        if it <= adapt_until and it % cfg.rho_period == 0:
            mult = _rho_multiplier(state.r_norm / eps_pri, state.s_norm / eps_dual)
            if mult != 1.0:
                try:
                    chol = _spd_factor(XtX + rho * mult * AtA, "ADMM")
                except FactorizationError:
                    adapt_until = 0
                    logger.warning(kv(tag + "_RHO_FROZEN", iter=it, rho=rho))
                else:
                    rho *= mult
                    state.u = state.u / mult
    state.rho = rho
    logger.info(kv(tag, iters=state.iters, converged=state.converged, rho=rho,
                   r_norm=state.r_norm, s_norm=state.s_norm))
    return state


def penalty_support(v: np.ndarray, numerics: NumericsConfig = DEFAULT_NUMERICS) -> tuple[np.ndarray, np.ndarray]:
    """Entries of v above the active threshold, and their signs."""
    thr = numerics.active_tol * max(1.0, float(np.abs(v).max(initial=0.0)))
    active = np.flatnonzero(np.abs(v) > thr)
    return active, np.sign(v[active])


def fused_differences(z: np.ndarray, numerics: NumericsConfig = DEFAULT_NUMERICS) -> tuple[np.ndarray, np.ndarray]:
    """Rows where the first differences of z are nonzero, and their signs."""
    return penalty_support(np.diff(z), numerics)


def dual_certificate(A: sp.csr_matrix, r: np.ndarray) -> np.ndarray:
    """Least squares solution g of A^T g = r."""
    try:
        return _spd_factor(A @ A.T, "KKT").solve(A @ r)
    except FactorizationError:
        return sla.lstsq(A.T.toarray(), r)[0]


def admm_certificate(state: AdmmState, lam: float) -> np.ndarray:
    """Dual certificate g read off the ADMM multiplier rho * u.

    z-stationarity gives lam Dbar^T g = -rho u, solved by a cumulative sum.
    Unlike ``dual_certificate`` this stays well defined when C X has
    dependent rows.
    """
    return np.cumsum(state.rho * state.u / lam)[:-1]


def kkt_residual(y, theta, C: sp.csr_matrix, lam: float, active, signs, X: sp.csr_matrix | None = None,
                 g: np.ndarray | None = None) -> float:
    """Violation of the optimality conditions X^T (y - theta) = lam (C X)^T g, |g| <= 1, g_I = s.

    Returns the largest of the relative stationarity error, the excess of
    |g| over 1 and the sign mismatch on the active rows. Without ``g`` the
    certificate is the least squares solution of the stationarity equation.
    """
    y = np.asarray(y, dtype=np.float64)
    if lam == 0:
        return float(np.abs(y - theta).max()) if X is None else 0.0
    A = C if X is None else (C @ X).tocsr()
    r = (y - theta) / lam if X is None else X.T @ (y - theta) / lam
    g = dual_certificate(A, r) if g is None else np.asarray(g, dtype=np.float64)
    stat = float(np.abs(A.T @ g - r).max(initial=0.0)) / max(1.0, float(np.abs(r).max(initial=0.0)))
    infeas = max(0.0, float(np.abs(g).max(initial=0.0)) - 1.0)
    mismatch = float(np.abs(g[active] - signs).max(initial=0.0)) if np.size(active) else 0.0
    return max(stat, infeas, mismatch)


def tf_objective(y, theta, grid: DesignGrid, k: int, lam: float) -> tuple[float, float]:
    """(objective, penalty) with penalty ||C^{k+1} theta||_1."""
    penalty = float(np.abs(weighted_deriv_sparse(grid, k + 1) @ theta).sum())
    return float(0.5 * np.sum((y - theta) ** 2) + lam * penalty), penalty


def polish_fit(y, grid: DesignGrid, k: int, lam: float, active, signs) -> np.ndarray:
    """Refit on the active set: projection of y - lam (C_I)^T s onto discrete splines with knots at I.

    Row i of C^{k+1} belongs to the knot at design position i + k.
    """
    y = np.asarray(y, dtype=np.float64)
    active = np.asarray(active, dtype=np.int64)
    C = weighted_deriv_sparse(grid, k + 1)
    rhs = y - lam * (C[active].T @ np.asarray(signs, dtype=np.float64)) if active.size else y
    return project_ls(rhs, grid, k, knots=active + k, route="DB")


def refine_polish(y, grid: DesignGrid, k: int, lam: float, active, signs,
                  numerics: NumericsConfig = DEFAULT_NUMERICS,
                  rounds: int = POLISH_ROUNDS) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Polish, then correct the active set from the dual certificate and polish again.

    After a polish on (I, s) the certificate equals s on I, so the only
    violations are |g_i| > 1 off I (a missing knot, added with sign g_i) and
    jumps on I against their sign (a spurious knot, dropped). Returns the
    (theta, active, signs) with the smallest objective seen.
    """
    C = weighted_deriv_sparse(grid, k + 1)
    active = np.asarray(active, dtype=np.int64)
    signs = np.asarray(signs, dtype=np.float64)
    best = None
    for _ in range(rounds):
        theta = polish_fit(y, grid, k, lam, active, signs)
        objective = tf_objective(y, theta, grid, k, lam)[0]
        if best is None or objective < best[0]:
            best = (objective, theta, active, signs)
        g = dual_certificate(C, (y - theta) / lam)
        jumps = C @ theta
        thr = numerics.active_tol * max(1.0, float(np.abs(jumps).max(initial=0.0)))
        add = np.setdiff1d(np.flatnonzero(np.abs(g) > 1.0 + numerics.active_tol), active)
        drop = active[jumps[active] * signs < -thr]
        if add.size == 0 and drop.size == 0:
            break
        logger.debug(kv("POLISH_REFINE", added=add.size, dropped=drop.size))
        active = np.union1d(np.setdiff1d(active, drop), add)
        signs = np.sign(g[active])
    return best[1], best[2], best[3]


def _check_inputs(y, grid: DesignGrid, k: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size != grid.n:
        raise DomainError(f"y has length {y.size}, expected {grid.n}")
    if k < 0 or k > grid.n - 2:
        raise DomainError(f"degree {k} outside [0, {grid.n - 2}]")
    return y


def _working_set_admm(y, grid: DesignGrid, k: int, cfg: SolverConfig, Dk, C,
                      numerics: NumericsConfig) -> tuple[np.ndarray, AdmmState, int]:
    """ADMM restricted to discrete splines with a working knot set, grown on KKT violations."""
    lam = cfg.lam
    warm = admm_core(y, sp.identity(grid.n, format="csr"), Dk, lam,
                     replace(cfg, max_iter=cfg.warm_iters), tag="ADMM_WARM")
    working = fused_differences(warm.z, numerics)[0] + k
    total = warm.iters
    for expansion in range(cfg.max_expansions + 1):
        N = dbs_values_sparse(grid, k, working).values.tocsr()
        state = admm_core(y, N, Dk, lam, cfg, tag="ADMM_DBS")
        total += state.iters
        theta = N @ state.beta
        g = dual_certificate(C, (y - theta) / lam)
        outside = np.setdiff1d(np.arange(C.shape[0]), working - k)
        violated = outside[np.abs(g[outside]) > 1.0 + numerics.active_tol]
        logger.info(kv("WORKING_SET", expansion=expansion, size=working.size, violations=violated.size))
        if violated.size == 0 or expansion == cfg.max_expansions:
            break
        working = np.union1d(working, violated + k)
    if violated.size:
        logger.warning(kv("WORKING_SET_UNRESOLVED", violations=violated.size))
        state.converged = False
    return theta, state, total


def trend_filter(y, grid: DesignGrid, k: int, cfg: SolverConfig | None = None,
                 numerics: NumericsConfig = DEFAULT_NUMERICS) -> FitResult:
    """Trend filtering of degree k; see the module docstring for the splitting."""
    cfg = cfg or SolverConfig()
    y = _check_inputs(y, grid, k)
    lam = float(cfg.lam)
    C = weighted_deriv_sparse(grid, k + 1)
    if lam == 0:
        objective, penalty = tf_objective(y, y, grid, k, 0.0)
        active, _ = penalty_support(C @ y, numerics)
        return FitResult(theta_hat=y.copy(), objective=objective, penalty=penalty, active_set=active,
                         kkt_residual=0.0, iters=0, method="tf", lam=0.0, df=float(grid.n))

    Dk = discrete_deriv_sparse(grid, k)
    if cfg.mode == "dbspline":
        theta, state, iters = _working_set_admm(y, grid, k, cfg, Dk, C, numerics)
    else:
        state = admm_core(y, sp.identity(grid.n, format="csr"), Dk, lam, cfg)
        theta, iters = state.beta, state.iters
    active, signs = fused_differences(state.z, numerics)
    objective, penalty = tf_objective(y, theta, grid, k, lam)

    polished = False
    if cfg.polish:
        candidate, cand_active, cand_signs = refine_polish(y, grid, k, lam, active, signs, numerics)
        cand_obj, cand_pen = tf_objective(y, candidate, grid, k, lam)
        if cand_obj <= objective * (1.0 + 1e-10) + 1e-14:
            theta, objective, penalty, polished = candidate, cand_obj, cand_pen, True
            active, signs = cand_active, cand_signs
        else:
            logger.warning(kv("POLISH_REJECTED", admm=objective, polished=cand_obj))

    kkt = kkt_residual(y, theta, C, lam, active, signs)
    if not state.converged:
        warnings.warn(f"ADMM did not converge within max_iter={cfg.max_iter} (r_norm={state.r_norm:.3e}, "
                      f"s_norm={state.s_norm:.3e})", ConvergenceWarning)
    return FitResult(
        theta_hat=theta, objective=objective, penalty=penalty, active_set=active, kkt_residual=kkt,
        iters=iters, method="tf", lam=lam, converged=state.converged, df=float(active.size + k + 1),
        r_norm=state.r_norm, s_norm=state.s_norm,
        extras={"signs": signs, "polished": polished, "mode": cfg.mode, "degree": k, "rho": state.rho},
    )