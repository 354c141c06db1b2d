"""Smoothing splines of degree 2m - 1, m = 1, 2, in their discrete form.

The fitted values solve (I + lam D^T K D) theta = y with D = D^m and K = K^m.
K is dense but its inverse is banded, so with gamma = K D theta the system is
rewritten as

    (K^{-1} + lam D D^T) gamma = D y,    theta = y - lam D^T gamma,

a banded solve with bandwidth m.
"""

from __future__ import annotations

import logging

import numpy as np

from ..basis.operators import discrete_deriv_sparse
from ..functionals.spline_k import k_matrix_inv
from ..grid.banded import BandedCholesky, BandedMatrix, banded_solve
from ..grid.design import DesignGrid
from ..utils.errors import DomainError
from ..utils.logs import kv
from .bw import _check, bw_filter, smoother_df
from .config import FitResult

logger = logging.getLogger(__name__)

VARIANTS = ("bound", "equal")


def smoothing_spline(y, grid: DesignGrid, m: int, lam: float) -> FitResult:
    """Smoothing spline fit at the design points; the penalty is 1/2 integral (D^m f)^2."""
    y = _check(y, grid, m, lam)
    K_inv = k_matrix_inv(grid, m)
    D = discrete_deriv_sparse(grid, m)
    system = K_inv.to_sparse() + lam * (D @ D.T)
    chol = BandedCholesky(BandedMatrix.from_sparse(system.tocoo(), m, m), route="SS")
    gamma = chol.solve(D @ y)
    theta = y - lam * (D.T @ gamma)
    Dtheta = D @ theta
    penalty = 0.5 * float(Dtheta @ banded_solve(K_inv, Dtheta))
    objective = 0.5 * float(np.sum((y - theta) ** 2)) + lam * penalty
    logger.info(kv("SMOOTHING_SPLINE", n=grid.n, m=m, lam=lam, penalty=penalty))
    return FitResult(
        theta_hat=theta, objective=objective, penalty=penalty, active_set=np.zeros(0, dtype=np.int64),
        kkt_residual=0.0, iters=1, method="ss", lam=float(lam),
        df=smoother_df(lambda Y: Y - lam * (D.T @ chol.solve(D @ Y)), grid.n),
        extras={"order": m},
    )


def ss_bw_distance_check(y, grid: DesignGrid, lambda_a: float, lambda_b: float | None = None,
                         variant: str = "bound", atol: float = 1e-9) -> tuple[float, float]:
    """Squared distance between the cubic smoothing spline and weighted BW fits, and its bound.

    ``variant="bound"``: smoothing spline with lambda_a, BW filter with
    lambda_b >= 3 lambda_a, bound (lambda_b / 3) integral (D^2 f)^2.
    ``variant="equal"``: both with lambda_a, bound lambda_a ||(W^2)^{1/2} D^2 theta_bw||^2.
    A violated bound is logged as a warning; the pair (lhs, rhs) is returned.
    """
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    if variant == "equal":
        if lambda_b is not None and lambda_b != lambda_a:
            raise DomainError(f"the equal variant needs lambda_b == lambda_a, got {lambda_b} and {lambda_a}")
        lambda_b = lambda_a
    elif lambda_b is None or lambda_b < 3 * lambda_a:
        raise DomainError(f"the bound needs lambda_b >= 3 lambda_a, got {lambda_b} and {lambda_a}")
    ss = smoothing_spline(y, grid, 2, lambda_a)
    bw = bw_filter(y, grid, 2, lambda_b, weighted=True)
    lhs = float(np.sum((ss.theta_hat - bw.theta_hat) ** 2))
    if variant == "bound":
        rhs = lambda_b / 3.0 * 2.0 * ss.penalty
    else:
        rhs = lambda_a * 2.0 * bw.penalty
    if lhs > rhs + atol * max(1.0, rhs):
        logger.warning(kv("SS_BW_BOUND", variant=variant, lhs=lhs, rhs=rhs))
    return lhs, rhs
