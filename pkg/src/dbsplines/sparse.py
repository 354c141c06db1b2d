"""DB-splines for a sparse knot set, filled in by local discrete-derivative systems.

Each basis function is pinned by zeros and a single one at design points
and completed by requiring f[x_{l-k}, ..., x_{l+1}] = 0 wherever x_l is not
a knot. The systems only involve O(k) neighbouring points per equation, so
every column costs time proportional to its support.
"""

from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp
from numpy.lib.stride_tricks import sliding_window_view

from ..basis.falling_factorial import FFBasisSpec
from ..grid.banded import BandedMatrix, banded_lu_solve
from ..grid.design import DesignGrid
from ..utils.logs import kv
from .basis import DBSplineBasis

logger = logging.getLogger(__name__)


def _window_weights(ext: np.ndarray, k: int) -> np.ndarray:
    """Divided-difference weights for every window of k + 2 consecutive points."""
    win = sliding_window_view(ext, k + 2)
    diff = win[:, :, None] - win[:, None, :]
    idx = np.arange(k + 2)
    diff[:, idx, idx] = 1.0
    return 1.0 / np.prod(diff, axis=2)


def _solve_local(weights, k, pinned: dict[int, float], unknown: list[int], equations: list[int]) -> dict[int, float]:
    """Solve the square system for ``unknown`` (one-based positions).

    Equation l reads sum_m w_{l,m} f(x_{l-k-1+m}) = 0 over m = 0..k+1;
    positions that are neither pinned nor unknown are zero.
    """
    if not unknown:
        return {}
    col_of = {p: c for c, p in enumerate(unknown)}
    rows, cols, vals = [], [], []
    rhs = np.zeros(len(equations))
    for r, ell in enumerate(equations):
        w = weights[ell - k - 1]
        for m in range(k + 2):
            p = ell - k + m
            if p in col_of:
                rows.append(r)
                cols.append(col_of[p])
                vals.append(w[m])
            else:
                rhs[r] -= w[m] * pinned.get(p, 0.0)
    S = sp.coo_matrix((vals, (rows, cols)), shape=(len(equations), len(unknown)))
    sol = banded_lu_solve(BandedMatrix.from_sparse(S), rhs)
    return dict(zip(unknown, sol))


def boundary_points(grid: DesignGrid, k: int) -> np.ndarray:
    """x_{n+1}, ..., x_{n+k+2} spaced by the mean gap."""
    gap = float(np.mean(grid.gaps))
    return grid.points[-1] + gap * np.arange(1, k + 3)


def dbs_values_sparse(grid: DesignGrid, k: int, knots) -> DBSplineBasis:
    """Evaluations of the r + k + 1 DB-splines for knots at design positions ``knots``.

    Knots are zero-based positions in [k, n - 2]. The k + 1 boundary knots
    sit at x_n, x_{n+1}, ..., x_{n+k} (one-based), so the full knot set
    reproduces the identity of the dense construction.
    """
    spec = FFBasisSpec(k, grid, knots)
    n = grid.n
    pos = spec.knot_positions
    r = pos.size
    ext = np.concatenate([grid.points, boundary_points(grid, k)])
    weights = _window_weights(ext, k)
    # one-based knot indices i_1..i_{r+k+1}, padded so that idx[q] is i_q
    idx = np.concatenate([[0], pos + 1, n + np.arange(k + 1)]).astype(int)

    columns = []
    for j in range(1, k + 2):
        ij = idx[j]
        pinned = {j: 1.0}
        knot_set = set(idx[1:j].tolist())
        unknown = list(range(j + 1, ij - k + 1))
        equations = [ell for ell in range(k + 1, ij) if ell not in knot_set]
        columns.append((pinned, _solve_local(weights, k, pinned, unknown, equations)))
    for j in range(1, r + 1):
        lo, one, hi = idx[j], idx[j + 1], idx[j + k + 1]
        pinned = {one: 1.0}
        knot_set = set(idx[j + 1: j + k + 2].tolist())
        unknown = list(range(lo + 1, one)) + list(range(one + 1, hi - k + 1))
        equations = [ell for ell in range(lo + 1, hi) if ell not in knot_set]
        columns.append((pinned, _solve_local(weights, k, pinned, unknown, equations)))

    rows, cols, vals = [], [], []
    for c, (pinned, solved) in enumerate(columns):
        for p, v in {**pinned, **solved}.items():
            if p <= n and v != 0.0:
                rows.append(p - 1)
                cols.append(c)
                vals.append(v)
    values = sp.csr_matrix((vals, (rows, cols)), shape=(n, r + k + 1))
    logger.debug(kv("DBS_SPARSE", n=n, k=k, r=r, nnz=values.nnz))
    return DBSplineBasis(spec=spec, values=values, boundary=ext[n:], kind="sparse")
