"""DB-spline basis containers and off-grid evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ..basis.falling_factorial import FFBasisSpec, ff_column
from ..basis.operators import ffb_inverse_sparse
from ..interpolate.dual import interp_implicit
from ..utils.errors import DomainError


@dataclass(frozen=True, eq=False)
class DBSplineBasis:
    """Evaluations N_j(x_i) of a DB-spline basis at the design points.

    ``values`` is an n x (r + k + 1) sparse matrix; ``boundary`` holds the
    synthetic design points used while building it. ``deviation`` is the
    cross-check error of the dense construction (NaN when not computed).
    """
    spec: FFBasisSpec
    values: sp.csr_matrix
    boundary: np.ndarray
    kind: str = "dense"
    deviation: float = float("nan")

    @property
    def degree(self) -> int:
        return self.spec.degree

    @cached_property
    def expansion(self) -> sp.csc_matrix:
        """A^{k+1} by columns; column j holds the falling factorial coefficients of dense N_j."""
        return ffb_inverse_sparse(self.spec.grid, self.degree).tocsc()

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        self._check_index(j)
        return self.values[:, [j]].toarray().ravel()

    def _check_index(self, j: int) -> None:
        if not 0 <= j < self.dim:
            raise DomainError(f"basis index {j} outside [0, {self.dim - 1}]")

    def knot_value(self, q: int) -> float:
        """Location of the q-th knot (zero-based), boundary knots mapping to b."""
        knots = self.spec.knot_positions
        if q < knots.size:
            return float(self.spec.grid.points[knots[q]])
        return float(self.spec.grid.b)

    def support(self, j: int) -> tuple[float, float]:
        """Closed interval outside which N_j vanishes."""
        self._check_index(j)
        grid, k = self.spec.grid, self.degree
        if j <= k:
            return grid.a, self.knot_value(j)
        return self.knot_value(j - k - 1), min(self.knot_value(j), grid.b)


@dataclass(frozen=True, eq=False)
class NaturalBasis:
    """Discrete natural spline basis of odd degree k = 2m - 1.

    Columns are the m left combinations, the middle DB-splines and the m
    right combinations, in that order.
    """
    degree: int
    spec: FFBasisSpec
    values: sp.csr_matrix

    @property
    def half_degree(self) -> int:
        return (self.degree + 1) // 2

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def left(self) -> sp.csr_matrix:
        return self.values[:, : self.half_degree]

    @property
    def middle(self) -> sp.csr_matrix:
        m = self.half_degree
        return self.values[:, m: self.dim - m]

    @property
    def right(self) -> sp.csr_matrix:
        return self.values[:, self.dim - self.half_degree:]

    def column(self, j: int) -> np.ndarray:
        if not 0 <= j < self.dim:
            raise DomainError(f"basis index {j} outside [0, {self.dim - 1}]")
        return self.values[:, [j]].toarray().ravel()


def _dense_expansion(basis: DBSplineBasis, j: int, xs: np.ndarray) -> np.ndarray:
    spec = basis.spec
    n, k = spec.n, spec.degree
    col = basis.expansion[:, [j]].toarray().ravel()
    out = np.zeros_like(xs)
    for i in range(j, min(j + k + 1, n - 1) + 1):
        if col[i] != 0.0:
            out += col[i] * ff_column(spec.grid.points, k, i, xs)
    return out


def dbs_eval(basis: DBSplineBasis | NaturalBasis, j: int, x):
    """N_j(x) for x in [a, b].

    Dense bases use the expansion in at most k + 2 falling factorial
    columns; sparse and natural bases interpolate their stored design-point
    values. Values outside the support are exactly zero.
    """
    spec = basis.spec
    xs = np.atleast_1d(spec.grid.check_domain(x)).astype(np.float64)
    dense_spec = FFBasisSpec(spec.degree, spec.grid)
    if isinstance(basis, NaturalBasis):
        out = interp_implicit(basis.column(j), dense_spec, xs)
    else:
        lo, hi = basis.support(j)
        if basis.kind == "dense":
            out = _dense_expansion(basis, j, xs)
        else:
            out = interp_implicit(basis.column(j), dense_spec, xs)
        out = np.where((xs >= lo) & (xs <= hi), out, 0.0)
    return float(out[0]) if np.ndim(x) == 0 else out
