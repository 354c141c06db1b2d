"""In-place O(nk) multiplication by H^k, its inverse and their transposes.

H^k factors as H^0 Z^1 L_1 Z^2 L_2 ... Z^k L_k, where L_i runs a cumulative
sum over v[i:] and Z^i scales v[i:] by the gaps (x[i:] - x[:n-i]) / i.
Each variant is a loop of cumulative sums or differences and gap scalings
over shrinking tails of the buffer.
"""

from __future__ import annotations

import logging

import numpy as np

from ..grid.design import DesignGrid
from ..utils.errors import DomainError, UnsupportedError
from .falling_factorial import FFBasisSpec, ffb_matrix
from .operators import extended_weight_diag

logger = logging.getLogger(__name__)

VARIANTS = ("H", "H_inv", "H_T", "H_inv_T")


class FlopCounter:
    """Counts arithmetic operations applied to the transformed buffer."""

    def __init__(self):
        self.flops = 0

    def add(self, count: int) -> None:
        self.flops += int(count)


def flop_bound(n: int, k: int) -> int:
    """Operation count ceiling of one fast transform: (2k + 1) n, at most 4nk once k >= 1."""
    return (2 * k + 1) * n


def _gaps(points: np.ndarray, i: int) -> np.ndarray:
    return (points[i:] - points[: points.size - i]) / i


def _cumsum(v, i, counter):
    v[i:] = np.cumsum(v[i:])
    counter.add(v.size - i - 1)


def _rev_cumsum(v, i, counter):
    v[i:] = np.cumsum(v[i:][::-1])[::-1]
    counter.add(v.size - i - 1)


def _diff(v, i, counter):
    v[i + 1:] = np.diff(v[i:])
    counter.add(v.size - i - 1)


def _rev_diff(v, i, counter):
    v[i:-1] = v[i:-1] - v[i + 1:]
    counter.add(v.size - i - 1)


def _scale(v, i, gaps, counter, inverse=False):
    if inverse:
        v[i:] /= gaps
    else:
        v[i:] *= gaps
    counter.add(v.size - i)


def fast_h_mult(spec: FFBasisSpec, v: np.ndarray, variant: str = "H",
                counter: FlopCounter | None = None) -> np.ndarray:
    """Overwrite ``v`` with H v, H^{-1} v, H^T v or H^{-T} v and return it."""
    if not spec.is_dense:
        raise UnsupportedError("fast transforms need the dense knot set; use the column submatrix instead")
    if variant not in VARIANTS:
        raise DomainError(f"unknown transform variant {variant!r}, expected one of {VARIANTS}")
    if not isinstance(v, np.ndarray) or v.dtype != np.float64:
        raise DomainError("fast transforms work in place on a float64 array")
    n, k = spec.n, spec.degree
    if v.shape != (n,):
        raise DomainError(f"vector has shape {v.shape}, expected ({n},)")
    counter = counter or FlopCounter()
    pts = spec.grid.points

    if variant == "H":
        for i in range(k, -1, -1):
            _cumsum(v, i, counter)
            if i:
                _scale(v, i, _gaps(pts, i), counter)
    elif variant == "H_inv":
        for i in range(k + 1):
            if i:
                _scale(v, i, _gaps(pts, i), counter, inverse=True)
            _diff(v, i, counter)
    elif variant == "H_T":
        for i in range(k + 1):
            if i:
                _scale(v, i, _gaps(pts, i), counter)
            _rev_cumsum(v, i, counter)
    else:
        for i in range(k, -1, -1):
            _rev_diff(v, i, counter)
            if i:
                _scale(v, i, _gaps(pts, i), counter, inverse=True)
    return v


def lateral_recursion_check(grid: DesignGrid, k: int) -> float:
    """Max relative deviation of H^k from H^{k-1} Z^k blockdiag(I_k, L_{n-k})."""
    if k < 1 or k > grid.n - 1:
        raise DomainError(f"degree {k} outside [1, {grid.n - 1}]")
    n = grid.n
    H = ffb_matrix(FFBasisSpec(k, grid))
    H_prev = ffb_matrix(FFBasisSpec(k - 1, grid))
    L = np.eye(n)
    L[k:, k:] = np.tril(np.ones((n - k, n - k)))
    rebuilt = H_prev @ np.diag(extended_weight_diag(grid, k)) @ L
    scale = max(1.0, float(np.abs(H).max()))
    return float(np.abs(H - rebuilt).max()) / scale
