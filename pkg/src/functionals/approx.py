"""Distance between the truncated power and falling factorial bases."""

from __future__ import annotations

import logging
from math import factorial

import numpy as np

from ..basis.falling_factorial import ff_column
from ..grid.design import DesignGrid
from ..utils.errors import DomainError
from ..utils.logs import kv

logger = logging.getLogger(__name__)


def truncated_power(points: np.ndarray, k: int, col: int, x) -> np.ndarray:
    """(x - x_{col-1})_+^k / k! for a dense-basis column col >= k + 1."""
    xs = np.asarray(x, dtype=np.float64)
    knot = points[col - 1]
    return np.where(xs > knot, (xs - knot) ** k, 0.0) / factorial(k)


def basis_distance_bound(grid: DesignGrid, k: int) -> float:
    """k (b - a)^{k-1} delta / (k - 1)!, with delta the largest gap; 0 when k < 2."""
    if k < 2:
        return 0.0
    return k * (grid.b - grid.a) ** (k - 1) * grid.max_gap / factorial(k - 1)


def basis_distance_check(grid: DesignGrid, k: int, mesh: int = 1000) -> float:
    """Largest sup-distance between paired truncated power and falling factorial columns.

    The supremum is estimated on ``mesh`` evenly spaced evaluation points in
    [a, b]; exceeding ``basis_distance_bound`` is logged as a warning.
    """
    if k < 0 or k > grid.n - 2:
        raise DomainError(f"degree {k} outside [0, {grid.n - 2}]")
    pts = grid.points
    xs = np.linspace(grid.a, grid.b, mesh)
    worst = 0.0
    for col in range(k + 1, grid.n):
        gap = np.abs(truncated_power(pts, k, col, xs) - ff_column(pts, k, col, xs))
        worst = max(worst, float(gap.max()))
    bound = basis_distance_bound(grid, k)
    if worst > bound * (1.0 + 1e-12) + 1e-15:
        logger.warning(kv("BASIS_DISTANCE", n=grid.n, k=k, distance=worst, bound=bound))
    return worst
