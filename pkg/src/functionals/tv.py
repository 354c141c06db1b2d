"""Total variation of the k-th derivative of a discrete spline."""

from __future__ import annotations

import numpy as np

from ..basis.falling_factorial import FFBasisSpec
from ..basis.operators import penalty_matrix_C
from ..calculus.discrete import GridFunction, apply_discrete_deriv
from ..grid.design import DesignGrid
from ..interpolate.dual import dual_coefficients
from ..utils.errors import DomainError


def _check(theta, grid: DesignGrid, k: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.size != grid.n:
        raise DomainError(f"theta has length {theta.size}, expected {grid.n}")
    if k < 0 or k > grid.n - 2:
        raise DomainError(f"degree {k} outside [0, {grid.n - 2}]")
    return theta


def tv_functional(theta, grid: DesignGrid, k: int) -> float:
    """TV(D^k f) of the interpolant of theta, as ||W^{k+1} D^{k+1} theta||_1."""
    theta = _check(theta, grid, k)
    return float(np.abs(penalty_matrix_C(grid, k + 1) @ theta).sum())


def tv_jump_sum(theta, grid: DesignGrid, k: int) -> float:
    """Sum of |jumps| of the k-th discrete derivative across x_{k+1}, ..., x_n."""
    theta = _check(theta, grid, k)
    deriv = apply_discrete_deriv(GridFunction(grid, theta), k).values[k:]
    return float(np.abs(np.diff(deriv)).sum())


def tv_from_coefficients(theta, grid: DesignGrid, k: int) -> float:
    """Sum of |alpha_j| over the truncated falling factorial columns."""
    theta = _check(theta, grid, k)
    alpha = dual_coefficients(theta, FFBasisSpec(k, grid))
    return float(np.abs(alpha[k + 1:]).sum())
