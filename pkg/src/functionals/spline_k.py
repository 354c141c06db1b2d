"""Banded inverses of the spline penalty matrices K^m, m = 1, 2.

For a natural spline of degree 2m - 1 with knots at the design points,
integral (D^m f)^2 = (D^m theta)^T K^m (D^m theta), and (K^m)^{-1} is banded
with bandwidth 2m - 1 in total.
"""

from __future__ import annotations

import logging

import numpy as np

from ..grid.banded import BandedMatrix, banded_solve
from ..grid.design import DesignGrid
from ..utils.errors import DomainError, UnsupportedError
from ..utils.logs import kv

logger = logging.getLogger(__name__)

RATIO_BOUNDS = (1.0 / 3.0, 1.0)


def k_matrix_inv(grid: DesignGrid, m: int) -> BandedMatrix:
    """(K^m)^{-1}: diagonal for m = 1, tridiagonal for m = 2."""
    pts, n = grid.points, grid.n
    if m == 1:
        return BandedMatrix.from_diagonals({0: 1.0 / np.diff(pts)}, (n - 1, n - 1))
    if m != 2:
        raise UnsupportedError(f"K matrices are available for m in (1, 2), got {m}")
    if n < 3:
        raise DomainError(f"m = 2 needs at least 3 design points, got {n}")
    span2 = pts[2:] - pts[:-2]
    diag = 4.0 / (3.0 * span2)
    i = np.arange(1, n - 2)
    off = 2.0 * (pts[i + 1] - pts[i]) / (3.0 * span2[i] * (pts[i + 1] - pts[i - 1]))
    return BandedMatrix.from_diagonals({-1: off, 0: diag, 1: off}, (n - 2, n - 2))


def w2_diag(grid: DesignGrid) -> np.ndarray:
    """Diagonal of W^2: (x_{i+2} - x_i) / 2."""
    pts = grid.points
    return 0.5 * (pts[2:] - pts[:-2])


def spectral_similarity_check(grid: DesignGrid, n_samples: int = 200, seed: int = 0,
                              atol: float = 1e-9) -> tuple[float, float]:
    """Smallest and largest u^T W^2 u / u^T K^2 u over random directions.

    (3, 1)-spectral similarity of K^2 and W^2 puts every ratio in [1/3, 1];
    a sample outside that range is logged as a warning.
    """
    if grid.n < 4:
        raise DomainError(f"spectral check needs n >= 4, got {grid.n}")
    K_inv = k_matrix_inv(grid, 2)
    w2 = w2_diag(grid)
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((grid.n - 2, n_samples))
    num = np.einsum("i,ij,ij->j", w2, U, U)
    den = np.einsum("ij,ij->j", U, banded_solve(K_inv, U))
    ratios = num / den
    lo, hi = float(ratios.min()), float(ratios.max())
    if lo < RATIO_BOUNDS[0] - atol or hi > RATIO_BOUNDS[1] + atol:
        logger.warning(kv("SPECTRAL_SIM", n=grid.n, lo=lo, hi=hi))
    return lo, hi
