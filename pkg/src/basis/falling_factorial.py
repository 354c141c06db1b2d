"""Falling factorial basis: evaluation, derivatives and basis matrices.

Columns are zero-based. For degree k, column j <= k is the scaled Newton
polynomial prod_{l<j} (x - x_l) / j!, and column j >= k + 1 is the
truncated Newton polynomial prod_{l=j-k}^{j-1} (x - x_l) / k! * 1{x > x_{j-1}},
whose knot is x_{j-1}. A sparse knot set is given by zero-based design
point positions p with k <= p <= n - 2; position p contributes column p + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Sequence

import numpy as np

from ..grid.design import DesignGrid
from ..utils.errors import DomainError


@dataclass(frozen=True, eq=False)
class FFBasisSpec:
    """Degree, grid and knot positions of a falling factorial basis."""
    degree: int
    grid: DesignGrid
    knots: np.ndarray | None = None

    def __post_init__(self):
        k, n = int(self.degree), self.grid.n
        if k < 0 or k > n - 1:
            raise DomainError(f"degree {k} outside [0, {n - 1}]")
        object.__setattr__(self, "degree", k)
        if self.knots is None:
            return
        knots = np.unique(np.asarray(self.knots, dtype=np.int64).reshape(-1))
        if knots.size != np.asarray(self.knots).size:
            raise DomainError("knot positions must be distinct")
        if knots.size and (knots[0] < k or knots[-1] > n - 2):
            raise DomainError(
                f"knot positions must lie in [{k}, {n - 2}] for degree {k}, got {knots[0]}..{knots[-1]}"
            )
        knots.setflags(write=False)
        object.__setattr__(self, "knots", knots)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def is_dense(self) -> bool:
        return self.knots is None or self.knots.size == self.n - self.degree - 1

    @property
    def knot_positions(self) -> np.ndarray:
        if self.knots is None:
            return np.arange(self.degree, self.n - 1)
        return self.knots

    @property
    def columns(self) -> np.ndarray:
        """Columns of the dense basis kept by this spec."""
        return np.concatenate([np.arange(self.degree + 1), self.knot_positions + 1])

    @property
    def dim(self) -> int:
        return int(self.columns.size)

    def with_knots(self, knots: Sequence[int] | None) -> "FFBasisSpec":
        return FFBasisSpec(self.degree, self.grid, knots)


def ff_column(points: np.ndarray, k: int, col: int, x, side: str = "left") -> np.ndarray:
    """Value of dense-basis column ``col`` at ``x``; ``col`` may equal n.

    ``side="right"`` uses the closed indicator 1{x >= knot}, i.e. the
    right limit at the knot.
    """
    xs = np.asarray(x, dtype=np.float64)
    if col <= k:
        out = np.prod(xs[..., None] - points[:col], axis=-1) / factorial(col)
        return out
    out = np.prod(xs[..., None] - points[col - k:col], axis=-1) / factorial(k)
    knot = points[col - 1]
    mask = xs >= knot if side == "right" else xs > knot
    return np.where(mask, out, 0.0)


def _elementary_symmetric(factors: np.ndarray, r: int) -> np.ndarray:
    """e_r of the rows of ``factors`` (shape (m, ...)) by the usual recurrence."""
    m = factors.shape[0]
    if r < 0 or r > m:
        return np.zeros(factors.shape[1:])
    e = [np.ones(factors.shape[1:])] + [np.zeros(factors.shape[1:]) for _ in range(r)]
    for i in range(m):
        for q in range(min(i + 1, r), 0, -1):
            e[q] = e[q] + factors[i] * e[q - 1]
    return e[r]


def ff_column_deriv(points: np.ndarray, k: int, col: int, d: int, x, side: str = "left") -> np.ndarray:
    """d-th derivative of dense-basis column ``col``; left derivative at the knot by default."""
    if d < 0 or d > k:
        raise DomainError(f"derivative order {d} outside [0, {k}]")
    xs = np.asarray(x, dtype=np.float64)
    if d == 0:
        return ff_column(points, k, col, xs, side)
    if col <= k:
        if d > col:
            return np.zeros_like(xs)
        factors = np.moveaxis(xs[..., None] - points[:col], -1, 0)
        return factorial(d) / factorial(col) * _elementary_symmetric(factors, col - d)
    factors = np.moveaxis(xs[..., None] - points[col - k:col], -1, 0)
    out = factorial(d) / factorial(k) * _elementary_symmetric(factors, k - d)
    knot = points[col - 1]
    mask = xs >= knot if side == "right" else xs > knot
    return np.where(mask, out, 0.0)


def _spec_column(spec: FFBasisSpec, j: int) -> int:
    if not 0 <= j < spec.dim:
        raise DomainError(f"basis index {j} outside [0, {spec.dim - 1}]")
    return int(spec.columns[j])


def ffb_eval(spec: FFBasisSpec, j: int, x, side: str = "left"):
    """h_j(x) for basis index j of ``spec`` (zero-based)."""
    col = _spec_column(spec, j)
    xs = spec.grid.check_domain(x)
    out = ff_column(spec.grid.points, spec.degree, col, xs, side)
    return float(out) if out.ndim == 0 else out


def ffb_deriv_eval(spec: FFBasisSpec, j: int, d: int, x, side: str = "left"):
    """d-th derivative of h_j at x (left derivative at its knot unless ``side="right"``)."""
    col = _spec_column(spec, j)
    xs = spec.grid.check_domain(x)
    out = ff_column_deriv(spec.grid.points, spec.degree, col, d, xs, side)
    return float(out) if out.ndim == 0 else out


def ffb_matrix(spec: FFBasisSpec, x=None) -> np.ndarray:
    """Basis matrix with entries h_j(x_i); rows are design points unless ``x`` is given."""
    pts = spec.grid.points
    xs = pts if x is None else spec.grid.check_domain(np.atleast_1d(x))
    cols = spec.columns
    out = np.empty((xs.size, cols.size))
    for q, col in enumerate(cols):
        out[:, q] = ff_column(pts, spec.degree, int(col), xs)
    return out


def ffb_deriv_matrix(spec: FFBasisSpec, d: int, x) -> np.ndarray:
    pts = spec.grid.points
    xs = spec.grid.check_domain(np.atleast_1d(x))
    out = np.empty((xs.size, spec.dim))
    for q, col in enumerate(spec.columns):
        out[:, q] = ff_column_deriv(pts, spec.degree, int(col), d, xs)
    return out
