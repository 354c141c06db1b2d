"""Discrete natural splines of odd degree."""

from __future__ import annotations

from math import factorial

import numpy as np
import scipy.sparse as sp

from ..basis.falling_factorial import FFBasisSpec
from ..calculus.discrete import GridFunction, discrete_deriv
from ..divided.newton import dd_weights
from ..grid.design import DesignGrid
from ..utils.errors import DomainError
from .basis import NaturalBasis


def half_degree(k: int) -> int:
    if k < 1 or k % 2 == 0:
        raise DomainError(f"natural splines need an odd degree k = 2m - 1, got {k}")
    return (k + 1) // 2


def natural_basis(grid: DesignGrid, k: int) -> NaturalBasis:
    """Basis of the n - k - 1 dimensional discrete natural spline space.

    Left members are sum_{i<=k+1} x_i^{j-1} N_i, right members are
    sum_{i>=n-k} (x_i - x_{n-k-1})^{j-1} N_i for j = 1..m, and the middle
    members are the DB-splines N_{k+2}, ..., N_{n-k-1}. Since dense
    DB-splines evaluate to delta_ij, only design-point values are stored.
    """
    m = half_degree(k)
    n = grid.n
    if n < 2 * k + 2:
        raise DomainError(f"natural splines of degree {k} need at least {2 * k + 2} points, got {n}")
    pts = grid.points
    left = np.zeros((n, m))
    left[: k + 1] = pts[: k + 1, None] ** np.arange(m)
    right = np.zeros((n, m))
    right[n - k - 1:] = (pts[n - k - 1:, None] - pts[n - k - 2]) ** np.arange(m)
    middle = sp.identity(n, format="csr")[:, k + 1: n - k - 1]
    values = sp.hstack([sp.csr_matrix(left), middle, sp.csr_matrix(right)], format="csr")
    return NaturalBasis(degree=k, spec=FFBasisSpec(k, grid), values=values)


def natural_boundary_residual(theta, grid: DesignGrid, k: int) -> float:
    """Largest discrete derivative of order m..k at the two boundary knots.

    Left: (Delta^l f)(x_{k+1}); right: l! f[x_{n-l}, ..., x_n]. Both vanish
    for discrete natural splines.
    """
    m = half_degree(k)
    theta = np.asarray(theta, dtype=np.float64)
    f = GridFunction(grid, theta)
    pts = grid.points
    worst = 0.0
    for ell in range(m, k + 1):
        worst = max(worst, abs(discrete_deriv(f, ell, pts[k])))
        right = factorial(ell) * float(dd_weights(pts[-ell - 1:]) @ theta[-ell - 1:])
        worst = max(worst, abs(right))
    return worst
