"""Sobolev seminorm of odd-degree discrete splines as a banded quadratic form.

For k = 2m - 1 and f in the span of the dense falling factorial basis,

    integral_a^b (D^m f)^2 = (D^m theta)^T V (D^m theta),

where V is symmetric with bandwidth m - 1 on each side. V comes out of a
2m-step differencing recursion started at the Gram matrix M of the m-th
derivatives of the basis columns m + 1, ..., n (one-based), and M has a
closed form from integration by parts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..basis.falling_factorial import FFBasisSpec, ff_column_deriv
from ..basis.operators import discrete_deriv_matrix
from ..grid.banded import BandedMatrix
from ..grid.design import DesignGrid
from ..interpolate.dual import dual_coefficients
from ..utils.errors import DomainError
from ..utils.logs import kv
from .spline_k import k_matrix_inv

logger = logging.getLogger(__name__)

BAND_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SobolevMatrices:
    m: int
    V: BandedMatrix
    M: np.ndarray
    band_residual: float
    K_inv: BandedMatrix | None = None


def _check_half_degree(grid: DesignGrid, m: int) -> int:
    m = int(m)
    if m < 1 or 2 * m - 1 > grid.n - 1:
        raise DomainError(f"half-degree {m} needs 1 <= 2m - 1 <= {grid.n - 1}")
    return m


def _deriv_tables(grid: DesignGrid, k: int):
    """D^d h_c at a (right limit), at b (left limit) and at every design point (right limit)."""
    pts, n = grid.points, grid.n
    at_a = np.empty((k + 1, n))
    at_b = np.empty((k + 1, n))
    at_pts = np.empty((k + 1, n, n))
    for d in range(k + 1):
        for c in range(n):
            at_a[d, c] = ff_column_deriv(pts, k, c, d, grid.a, side="right")
            at_b[d, c] = ff_column_deriv(pts, k, c, d, grid.b, side="left")
            at_pts[d, :, c] = ff_column_deriv(pts, k, c, d, pts, side="right")
    return at_a, at_b, at_pts


def sobolev_M(grid: DesignGrid, m: int) -> np.ndarray:
    """Gram matrix of D^m h_{i+m}, i = 1..n-m, from boundary evaluations only.

    For i >= j (one-based), with f|_s^t = f^-(t) - f^+(s):
      i <= m: [sum_{l<i} (-1)^{l-1} D^{m+l-1}h_{i+m} D^{m-l}h_{j+m} + (-1)^{i-1} D^{m-i}h_{j+m}] from a to b
      i > m:  [sum_{l<m} (-1)^{l-1} D^{m+l-1}h_{i+m} D^{m-l}h_{j+m} + (-1)^{m-1} h_{j+m}] from x_{i+m-1} to b
    """
    m = _check_half_degree(grid, m)
    k, n = 2 * m - 1, grid.n
    at_a, at_b, at_pts = _deriv_tables(grid, k)
    size = n - m
    M = np.zeros((size, size))
    for i in range(1, size + 1):
        ci = i + m - 1
        cj = np.arange(m, ci + 1)
        # lower limit: a, or the right limit at the knot x_{i+m-1}
        terms, low_tab = (i - 1, at_a) if i <= m else (m - 1, at_pts[:, ci - 1, :])
        total = np.zeros(cj.size)
        for ell in range(1, terms + 1):
            sign = (-1) ** (ell - 1)
            upper = at_b[m + ell - 1, ci] * at_b[m - ell, cj]
            low = low_tab[m + ell - 1, ci] * low_tab[m - ell, cj]
            total += sign * (upper - low)
        d_last = m - i if i <= m else 0
        total += (-1) ** terms * (at_b[d_last, cj] - low_tab[d_last, cj])
        M[i - 1, : i] = total
    return np.tril(M) + np.tril(M, -1).T


def _below(A: np.ndarray) -> np.ndarray:
    """A(i+1, j), zero past the last row."""
    out = np.zeros_like(A)
    out[:-1] = A[1:]
    return out


def _row_recursion(V: np.ndarray, pts: np.ndarray, m: int) -> np.ndarray:
    V = V.copy()
    for ell in range(1, m):
        start = m - ell
        r = np.arange(start, V.shape[0])
        scale = (2 * m - ell) / (pts[r + m] - pts[r - m + ell])
        V[start:] = (V[start:] - _below(V)[start:]) * scale[:, None]
    return V - _below(V)


def sobolev_V(grid: DesignGrid, m: int, M_override=None) -> SobolevMatrices:
    """V^m from the row then column recursion on M (or on ``M_override``)."""
    m = _check_half_degree(grid, m)
    size = grid.n - m
    if M_override is None:
        M = sobolev_M(grid, m)
    else:
        M = np.asarray(M_override, dtype=np.float64)
        if M.shape != (size, size):
            raise DomainError(f"M has shape {M.shape}, expected ({size}, {size})")
    pts = grid.points
    V = _row_recursion(M, pts, m)
    V = _row_recursion(V.T, pts, m).T
    V = 0.5 * (V + V.T)
    i, j = np.indices(V.shape)
    outside = np.abs(i - j) >= m
    scale = max(1.0, float(np.abs(V).max()))
    band_residual = float(np.abs(V[outside]).max(initial=0.0)) / scale
    if band_residual > BAND_TOL:
        logger.warning(kv("SOBOLEV_BAND", n=grid.n, m=m, residual=band_residual))
    V_band = BandedMatrix.from_diagonals({d: np.diag(V, d) for d in range(-(m - 1), m)}, V.shape)
    K_inv = None
    if m in (1, 2):
        K_inv = k_matrix_inv(grid, m)
    return SobolevMatrices(m=m, V=V_band, M=M, band_residual=band_residual, K_inv=K_inv)


def sobolev_functional(theta, grid: DesignGrid, m: int, V: BandedMatrix | None = None) -> float:
    """(D^m theta)^T V^m (D^m theta)."""
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.size != grid.n:
        raise DomainError(f"theta has length {theta.size}, expected {grid.n}")
    V = sobolev_V(grid, m).V if V is None else V
    u = discrete_deriv_matrix(grid, m) @ theta
    return float(u @ (V @ u))


def sobolev_quadrature(theta, grid: DesignGrid, m: int) -> float:
    """integral_a^b (D^m f)^2 for the degree 2m - 1 interpolant, by Gauss-Legendre per segment."""
    m = _check_half_degree(grid, m)
    k = 2 * m - 1
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    alpha = dual_coefficients(theta, FFBasisSpec(k, grid))
    pts = grid.points
    breaks = np.unique(np.concatenate([[grid.a], pts, [grid.b]]))
    nodes, weights = np.polynomial.legendre.leggauss(k + 1)
    lo, hi = breaks[:-1], breaks[1:]
    xs = (0.5 * (hi - lo)[:, None] * nodes + 0.5 * (hi + lo)[:, None]).ravel()
    wts = (0.5 * (hi - lo)[:, None] * weights).ravel()
    deriv = np.zeros_like(xs)
    for c in range(m, grid.n):
        if alpha[c] != 0.0:
            deriv += alpha[c] * ff_column_deriv(pts, k, c, m, xs)
    return float(wts @ deriv**2)
