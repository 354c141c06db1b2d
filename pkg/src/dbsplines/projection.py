"""Least squares projection onto a discrete spline space, three equivalent ways.

FF solves the normal equations of the falling factorial basis matrix,
DD projects onto the null space of the rows J^c of A = Z^{k+1} B^{k+1},
and DB solves the banded normal equations of the DB-spline basis.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from ..basis.falling_factorial import FFBasisSpec, ffb_matrix
from ..basis.operators import ffb_inverse_sparse
from ..grid.banded import BandedMatrix, banded_solve
from ..grid.design import DesignGrid
from ..utils.errors import DomainError, FactorizationError
from .sparse import dbs_values_sparse

ROUTES = ("FF", "DD", "DB")


def _complement_rows(spec: FFBasisSpec) -> np.ndarray:
    return np.setdiff1d(np.arange(spec.n), spec.columns)


def deriv_constraint_matrix(grid: DesignGrid, k: int, knots) -> sp.csr_matrix:
    """(A^{k+1})_{J^c}: rows of A outside the basis columns J."""
    spec = FFBasisSpec(k, grid, knots)
    return ffb_inverse_sparse(grid, k)[_complement_rows(spec)]


def _null_projection(A_c: sp.csr_matrix, y: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """y - A_c^T w with (A_c A_c^T) w = A_c y; returns (projection, w)."""
    if A_c.shape[0] == 0:
        return y.copy(), np.zeros(0)
    G = BandedMatrix.from_sparse((A_c @ A_c.T).tocoo(), k + 1, k + 1)
    w = banded_solve(G, A_c @ y, route="DD")
    return y - A_c.T @ w, w


def project_ls(y, grid: DesignGrid, k: int, knots=None, route: str = "DB") -> np.ndarray:
    """Projection of y onto the span of the degree-k falling factorial basis with ``knots``."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size != grid.n:
        raise DomainError(f"y has length {y.size}, expected {grid.n}")
    if route not in ROUTES:
        raise DomainError(f"unknown projection route {route!r}, expected one of {ROUTES}")
    spec = FFBasisSpec(k, grid, knots)
    if route == "FF":
        H = ffb_matrix(spec)
        try:
            factor = sla.cho_factor(H.T @ H)
        except np.linalg.LinAlgError as exc:
            raise FactorizationError(f"normal equations are not positive definite: {exc}", "FF") from exc
        return H @ sla.cho_solve(factor, H.T @ y)
    if route == "DD":
        A_c = deriv_constraint_matrix(grid, k, spec.knots)
        return _null_projection(A_c, y, k)[0]
    N = dbs_values_sparse(grid, k, spec.knots).values
    G = BandedMatrix.from_sparse((N.T @ N).tocoo())
    beta = banded_solve(G, N.T @ y, route="DB")
    return N @ beta


def ffb_pinv_apply(y, grid: DesignGrid, k: int, knots=None) -> np.ndarray:
    """Least squares coefficients (H_T)^+ y = A_J (I - A_c^+ A_c) y, indexed like the basis columns."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size != grid.n:
        raise DomainError(f"y has length {y.size}, expected {grid.n}")
    spec = FFBasisSpec(k, grid, knots)
    A = ffb_inverse_sparse(grid, k)
    fitted, _ = _null_projection(A[_complement_rows(spec)], y, k)
    return A[spec.columns] @ fitted
