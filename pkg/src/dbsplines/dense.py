"""DB-splines for the dense knot set x_{k+1}, ..., x_{n-1}."""

from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp
from numpy.lib.stride_tricks import sliding_window_view

from ..basis.falling_factorial import FFBasisSpec
from ..divided.newton import dd_weights
from ..grid.design import DesignGrid
from ..utils.errors import DomainError
from ..utils.logs import kv
from .basis import DBSplineBasis

logger = logging.getLogger(__name__)

CROSS_CHECK_MAX_N = 2000


def extended_points(grid: DesignGrid, k: int) -> np.ndarray:
    """x_{-(k-1)}, ..., x_0, x_1, ..., x_n, x_{n+1} with synthetic ends.

    x_0 = a when a < x_1 and x_{n+1} = b when b > x_n; otherwise, and for
    the remaining left points, the mean gap is used as spacing.
    """
    pts = grid.points
    gap = float(np.mean(grid.gaps))
    x0 = grid.a if grid.a < pts[0] else pts[0] - gap
    left = x0 - gap * np.arange(k - 1, -1, -1)
    right = grid.b if grid.b > pts[-1] else pts[-1] + gap
    return np.concatenate([left, pts, [right]])


def dense_evaluations(grid: DesignGrid, k: int) -> np.ndarray:
    """N_j(x_i) from the normalized truncated-Newton divided differences.

    Entry (i, j) is (x_{j+1} - x_{j-k}) times the divided difference of
    z -> eta_+(z; x_{i-k+1}, ..., x_i) over x_{j-k}, ..., x_{j+1}.
    """
    n = grid.n
    ext = extended_points(grid, k)
    windows = sliding_window_view(ext, k + 2)[:n]
    weights = np.array([dd_weights(w) for w in windows])
    spans = windows[:, -1] - windows[:, 0]
    # design point x_i sits at ext[i + k - 1] (one-based i)
    knots = ext[k: k + n]
    out = np.empty((n, n))
    for i in range(n):
        factors = ext[i + 1: i + 1 + k] if k else np.zeros(0)
        eta = np.prod(windows[..., None] - factors, axis=-1) * (windows > knots[i])
        out[i] = spans * np.einsum("jm,jm->j", weights, eta)
    return out


def dbs_values_dense(grid: DesignGrid, k: int, cross_check: bool = True) -> DBSplineBasis:
    """Dense DB-spline basis: N_j(x_i) = delta_ij.

    With ``cross_check`` (and n <= 2000) the divided-difference definition is
    evaluated as well and its max deviation from the identity is stored.
    """
    n = grid.n
    if k < 0 or n < k + 2:
        raise DomainError(f"dense DB-splines of degree {k} need at least {k + 2} points, got {n}")
    deviation = float("nan")
    if cross_check and n <= CROSS_CHECK_MAX_N:
        deviation = float(np.abs(dense_evaluations(grid, k) - np.eye(n)).max())
        logger.debug(kv("DBS_DENSE", n=n, k=k, deviation=deviation))
    return DBSplineBasis(
        spec=FFBasisSpec(k, grid),
        values=sp.identity(n, format="csr"),
        boundary=extended_points(grid, k),
        kind="dense",
        deviation=deviation,
    )
