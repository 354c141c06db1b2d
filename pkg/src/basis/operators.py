"""Discrete derivative, weight and extended derivative matrices.

All builders assemble with ``scipy.sparse`` and hand back banded storage.
Recursions (one-based in the comments):

    D^1 = (W^1)^{-1} Dbar_n,   D^k = (W^k)^{-1} Dbar_{n-k+1} D^{k-1}
    B^1 = (Z^1)^{-1} Bbar_{n,1},   B^k = (Z^k)^{-1} Bbar_{n,k} B^{k-1}
    C^k = W^k D^k = Dbar_{n-k+1} D^{k-1}

with W^k = diag((x_{i+k} - x_i) / k) and Z^k = diag(1, ..., 1, W^k).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..grid.banded import BandedMatrix
from ..grid.design import DesignGrid
from ..utils.errors import DomainError
from ..utils.logs import kv
from .falling_factorial import FFBasisSpec, ffb_matrix

logger = logging.getLogger(__name__)


def diff_matrix(p: int) -> sp.csr_matrix:
    """(p-1) x p first difference matrix with rows (-1, 1)."""
    return sp.diags([-np.ones(p - 1), np.ones(p - 1)], [0, 1], shape=(p - 1, p), format="csr")


def weight_diag(grid: DesignGrid, m: int) -> np.ndarray:
    x = grid.points
    return (x[m:] - x[: grid.n - m]) / m


def extended_weight_diag(grid: DesignGrid, m: int) -> np.ndarray:
    if m == 0:
        return np.ones(grid.n)
    return np.concatenate([np.ones(m), weight_diag(grid, m)])


def extended_diff_matrix(n: int, m: int) -> sp.csr_matrix:
    """n x n matrix: identity in the first m rows, first differences below."""
    sub = np.zeros(n - 1)
    sub[m - 1:] = -1.0
    return sp.diags([np.ones(n), sub], [0, -1], shape=(n, n), format="csr")


def discrete_deriv_sparse(grid: DesignGrid, m: int) -> sp.csr_matrix:
    """D^m as a sparse (n - m) x n matrix; D^0 is the identity."""
    n = grid.n
    if m < 0 or m > n - 1:
        raise DomainError(f"order {m} outside [0, {n - 1}]")
    D = sp.identity(n, format="csr")
    for q in range(1, m + 1):
        D = sp.diags(1.0 / weight_diag(grid, q)) @ diff_matrix(n - q + 1) @ D
    return D.tocsr()


def extended_deriv_sparse(grid: DesignGrid, m: int) -> sp.csr_matrix:
    """B^m as a sparse n x n lower-banded matrix."""
    n = grid.n
    if m < 0 or m > n - 1:
        raise DomainError(f"order {m} outside [0, {n - 1}]")
    B = sp.identity(n, format="csr")
    for q in range(1, m + 1):
        B = sp.diags(1.0 / extended_weight_diag(grid, q)) @ extended_diff_matrix(n, q) @ B
    return B.tocsr()


def weighted_deriv_sparse(grid: DesignGrid, m: int) -> sp.csr_matrix:
    """C^m = W^m D^m, computed as Dbar_{n-m+1} D^{m-1}."""
    if m < 1 or m > grid.n - 1:
        raise DomainError(f"order {m} outside [1, {grid.n - 1}]")
    return (diff_matrix(grid.n - m + 1) @ discrete_deriv_sparse(grid, m - 1)).tocsr()


def ffb_inverse_sparse(grid: DesignGrid, k: int) -> sp.csr_matrix:
    """A = Z^{k+1} B^{k+1}, the inverse of the dense degree-k basis matrix."""
    return (sp.diags(extended_weight_diag(grid, k + 1)) @ extended_deriv_sparse(grid, k + 1)).tocsr()


@dataclass(frozen=True, eq=False)
class PenaltyOperators:
    """Banded discrete-derivative family of order m on a grid."""
    order: int
    grid: DesignGrid
    D: BandedMatrix
    B: BandedMatrix
    Bbar: BandedMatrix
    W: np.ndarray
    Z: np.ndarray
    C: BandedMatrix


def build_penalty_ops(grid: DesignGrid, m: int) -> PenaltyOperators:
    """Assemble D^m, B^m, Bbar_{n,m}, W^m, Z^m and C^m for 1 <= m <= n - 1."""
    n = grid.n
    if m < 1 or m > n - 1:
        raise DomainError(f"order {m} outside [1, {n - 1}]")
    D = BandedMatrix.from_sparse(discrete_deriv_sparse(grid, m), 0, m)
    B = BandedMatrix.from_sparse(extended_deriv_sparse(grid, m), m, 0)
    Bbar = BandedMatrix.from_sparse(extended_diff_matrix(n, m), 1, 0)
    C = BandedMatrix.from_sparse(weighted_deriv_sparse(grid, m), 0, m)
    return PenaltyOperators(
        order=m,
        grid=grid,
        D=D,
        B=B,
        Bbar=Bbar,
        W=weight_diag(grid, m),
        Z=extended_weight_diag(grid, m),
        C=C,
    )


def discrete_deriv_matrix(grid: DesignGrid, m: int) -> BandedMatrix:
    """Banded D^m, (n - m) x n with upper bandwidth m."""
    return BandedMatrix.from_sparse(discrete_deriv_sparse(grid, m), 0, m)


def penalty_matrix_C(grid: DesignGrid, m: int) -> BandedMatrix:
    """Banded C^m = W^m D^m, the trend filtering penalty matrix for m = k + 1."""
    return BandedMatrix.from_sparse(weighted_deriv_sparse(grid, m), 0, m)


def ffb_inverse_matrix(grid: DesignGrid, k: int) -> BandedMatrix:
    """Banded A = Z^{k+1} B^{k+1}; lower bandwidth k + 1."""
    return BandedMatrix.from_sparse(ffb_inverse_sparse(grid, k), k + 1, 0)


def verify_inverse_identity(grid: DesignGrid, k: int) -> float:
    """max |Z^{k+1} B^{k+1} H^k - I| with H^k built densely."""
    H = ffb_matrix(FFBasisSpec(k, grid))
    dev = float(np.abs(ffb_inverse_sparse(grid, k) @ H - np.eye(grid.n)).max())
    logger.debug(kv("INVERSE_IDENTITY", n=grid.n, k=k, ratio=grid.spacing_ratio, deviation=dev))
    return dev
