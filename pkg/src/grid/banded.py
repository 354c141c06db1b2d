"""Banded matrix storage, banded factorizations and condition numbers.

Storage follows the LAPACK general band layout used by
``scipy.linalg.solve_banded``: entry ``A[i, j]`` lives at
``bands[upper_bw + i - j, j]``. For symmetric matrices the first
``upper_bw + 1`` rows of that array are exactly the upper form expected by
``scipy.linalg.cholesky_banded`` and ``scipy.linalg.eigvals_banded``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from ..utils.config import DEFAULT_NUMERICS
from ..utils.errors import DomainError, FactorizationError


@dataclass(frozen=True, eq=False)
class BandedMatrix:
    n_rows: int
    n_cols: int
    lower_bw: int
    upper_bw: int
    bands: np.ndarray

    def __post_init__(self):
        if self.lower_bw < 0 or self.upper_bw < 0:
            raise DomainError(f"bandwidths must be nonnegative, got ({self.lower_bw}, {self.upper_bw})")
        expected = (self.lower_bw + self.upper_bw + 1, self.n_cols)
        bands = np.array(self.bands, dtype=np.float64)
        if bands.shape != expected:
            raise DomainError(f"band storage has shape {bands.shape}, expected {expected}")
        # zero the storage slots that fall outside the matrix
        for d in range(-self.lower_bw, self.upper_bw + 1):
            row = self.upper_bw - d
            lo, hi = self._diag_cols(d)
            bands[row, :lo] = 0.0
            bands[row, hi:] = 0.0
        bands.setflags(write=False)
        object.__setattr__(self, "bands", bands)

    def _diag_cols(self, d: int) -> tuple[int, int]:
        """Column range [lo, hi) covered by diagonal offset d = j - i."""
        lo = max(d, 0)
        hi = min(self.n_cols, self.n_rows + d)
        return lo, max(lo, hi)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @classmethod
    def from_diagonals(cls, diagonals: dict[int, np.ndarray], shape: tuple[int, int]) -> "BandedMatrix":
        """Build from ``{offset: values}`` where offset = j - i."""
        n_rows, n_cols = shape
        lower = max([0] + [-d for d in diagonals])
        upper = max([0] + [d for d in diagonals])
        bands = np.zeros((lower + upper + 1, n_cols))
        for d, vals in diagonals.items():
            lo = max(d, 0)
            hi = min(n_cols, n_rows + d)
            if hi > lo:
                bands[upper - d, lo:hi] = np.broadcast_to(np.asarray(vals, dtype=np.float64), (hi - lo,))
        return cls(n_rows, n_cols, lower, upper, bands)

    @classmethod
    def from_sparse(cls, S, lower_bw: int | None = None, upper_bw: int | None = None) -> "BandedMatrix":
        """Convert a scipy.sparse matrix; bandwidths default to the nonzero pattern."""
        S = sp.coo_matrix(S)
        S.sum_duplicates()
        mask = S.data != 0
        rows, cols, vals = S.row[mask], S.col[mask], S.data[mask]
        if lower_bw is None:
            lower_bw = int(max(0, (rows - cols).max())) if rows.size else 0
        if upper_bw is None:
            upper_bw = int(max(0, (cols - rows).max())) if rows.size else 0
        if rows.size and ((rows - cols).max() > lower_bw or (cols - rows).max() > upper_bw):
            raise DomainError(f"nonzeros fall outside bandwidths ({lower_bw}, {upper_bw})")
        bands = np.zeros((lower_bw + upper_bw + 1, S.shape[1]))
        bands[upper_bw + rows - cols, cols] = vals
        return cls(S.shape[0], S.shape[1], lower_bw, upper_bw, bands)

    @classmethod
    def from_dense(cls, A, lower_bw: int | None = None, upper_bw: int | None = None) -> "BandedMatrix":
        return cls.from_sparse(sp.coo_matrix(np.asarray(A, dtype=np.float64)), lower_bw, upper_bw)

    def diagonal(self, d: int = 0) -> np.ndarray:
        if d < -self.lower_bw or d > self.upper_bw:
            lo, hi = self._diag_cols(d)
            return np.zeros(hi - lo)
        lo, hi = self._diag_cols(d)
        return self.bands[self.upper_bw - d, lo:hi].copy()

    def to_sparse(self) -> sp.csr_matrix:
        offsets, data = [], []
        for d in range(-self.lower_bw, self.upper_bw + 1):
            vals = self.diagonal(d)
            if vals.size:
                offsets.append(d)
                data.append(vals)
        if not offsets:
            return sp.csr_matrix(self.shape)
        return sp.diags(data, offsets, shape=self.shape, format="csr")

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def matvec(self, v) -> np.ndarray:
        """Product A @ v for a vector or a column stack, one diagonal at a time."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape[0] != self.n_cols:
            raise DomainError(f"operand has {v.shape[0]} rows, matrix has {self.n_cols} columns")
        out = np.zeros((self.n_rows,) + v.shape[1:])
        for d in range(-self.lower_bw, self.upper_bw + 1):
            lo, hi = self._diag_cols(d)
            if hi <= lo:
                continue
            vals = self.bands[self.upper_bw - d, lo:hi]
            if v.ndim > 1:
                vals = vals[:, None]
            out[lo - d:hi - d] += vals * v[lo:hi]
        return out

    def __matmul__(self, v) -> np.ndarray:
        return self.matvec(v)

    @property
    def T(self) -> "BandedMatrix":
        return BandedMatrix.from_sparse(self.to_sparse().T, self.upper_bw, self.lower_bw)

    def gram(self) -> "BandedMatrix":
        """A^T A as a symmetric banded matrix."""
        S = self.to_sparse()
        bw = self.lower_bw + self.upper_bw
        return BandedMatrix.from_sparse((S.T @ S).tocoo(), bw, bw)

    def is_symmetric(self, rtol: float = 1e-12) -> bool:
        if self.n_rows != self.n_cols:
            return False
        diff = abs(self.to_sparse() - self.to_sparse().T)
        scale = max(1.0, float(np.abs(self.bands).max(initial=0.0)))
        return float(diff.max()) <= rtol * scale

    def upper_form(self) -> np.ndarray:
        """Upper band storage of a symmetric matrix, shape (bw + 1, n)."""
        if self.n_rows != self.n_cols:
            raise DomainError(f"symmetric storage needs a square matrix, got {self.shape}")
        bw = max(self.lower_bw, self.upper_bw)
        if bw == self.upper_bw:
            return self.bands[: bw + 1]
        return BandedMatrix.from_sparse(self.to_sparse(), bw, bw).bands[: bw + 1]


class BandedCholesky:
    """Cholesky factor U (A = U^T U) of an SPD banded matrix, reusable across solves."""

    def __init__(self, A: BandedMatrix, pivot_floor: float | None = None, route: str | None = None):
        floor = DEFAULT_NUMERICS.pivot_floor if pivot_floor is None else pivot_floor
        ab = A.upper_form()
        try:
            cb = sla.cholesky_banded(ab, lower=False)
        except np.linalg.LinAlgError as exc:
            raise FactorizationError(f"matrix is not positive definite: {exc}", route) from exc
        pivots = cb[-1]
        if pivots.min() <= floor * pivots.max():
            raise FactorizationError(
                f"pivot {pivots.min():.3e} under floor {floor:.1e} x {pivots.max():.3e}", route
            )
        self.n = A.n_rows
        self.bandwidth = ab.shape[0] - 1
        self._cb = cb

    def solve(self, rhs) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=np.float64)
        if rhs.shape[0] != self.n:
            raise DomainError(f"right-hand side has length {rhs.shape[0]}, expected {self.n}")
        return sla.cho_solve_banded((self._cb, False), rhs)


def banded_solve(A: BandedMatrix, rhs, pivot_floor: float | None = None, route: str | None = None) -> np.ndarray:
    """Solve A x = rhs for SPD banded A by banded Cholesky, O(n bw^2)."""
    return BandedCholesky(A, pivot_floor, route).solve(rhs)


def banded_lu_solve(A: BandedMatrix, rhs) -> np.ndarray:
    """Solve a general square banded system by banded LU with partial pivoting."""
    if A.n_rows != A.n_cols:
        raise DomainError(f"banded LU needs a square matrix, got {A.shape}")
    try:
        return sla.solve_banded((A.lower_bw, A.upper_bw), A.bands, np.asarray(rhs, dtype=np.float64))
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"singular banded system: {exc}") from exc


def _extreme_eigs_dense(G: np.ndarray) -> tuple[float, float]:
    eigs = sla.eigvalsh(G)
    return float(eigs[0]), float(eigs[-1])


def _extreme_eigs_banded(G: BandedMatrix) -> tuple[float, float]:
    ab = G.upper_form()
    n = G.n_rows
    lo = sla.eigvals_banded(ab, lower=False, select="i", select_range=(0, 0))
    hi = sla.eigvals_banded(ab, lower=False, select="i", select_range=(n - 1, n - 1))
    return float(lo[0]), float(hi[0])


def condition_number(M) -> float:
    """lambda_max(M^T M) / lambda_min(M^T M); +inf when lambda_min is not positive.

    Dense arrays use a dense symmetric eigensolver; banded and scipy.sparse
    inputs form the Gram matrix in band storage and only compute its two
    extreme eigenvalues.
    """
    if isinstance(M, BandedMatrix) or sp.issparse(M):
        S = M.to_sparse() if isinstance(M, BandedMatrix) else sp.csr_matrix(M)
        if 0 in S.shape:
            raise DomainError("condition number of an empty matrix")
        G = BandedMatrix.from_sparse((S.T @ S).tocoo())
        bw = max(G.lower_bw, G.upper_bw)
        if bw > G.n_rows // 4:
            lam_min, lam_max = _extreme_eigs_dense(G.to_dense())
        else:
            lam_min, lam_max = _extreme_eigs_banded(BandedMatrix.from_sparse(G.to_sparse(), bw, bw))
    else:
        A = np.atleast_2d(np.asarray(M, dtype=np.float64))
        if A.size == 0:
            raise DomainError("condition number of an empty matrix")
        lam_min, lam_max = _extreme_eigs_dense(A.T @ A)
    if lam_min <= 0.0:
        return float("inf")
    return lam_max / lam_min
