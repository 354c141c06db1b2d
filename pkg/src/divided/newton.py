"""Divided differences, Newton polynomials and Newton interpolation.

The default route for f[z_1, ..., z_r] is the explicit weight formula
sum_i w_i f(z_i) with w_i = 1 / prod_{j != i} (z_i - z_j); the classical
recursive table is kept for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..utils.errors import DomainError


@dataclass(frozen=True, eq=False)
class Centers:
    """Ordered, pairwise distinct centers z_1, ..., z_r (r >= 1)."""
    values: np.ndarray

    def __post_init__(self):
        z = np.array(self.values, dtype=np.float64).reshape(-1)
        if z.size < 1:
            raise DomainError("at least one center is required")
        if z.size > 1 and np.min(np.diff(np.sort(z))) <= 0:
            raise DomainError(f"centers must be distinct, got {z.tolist()}")
        z.setflags(write=False)
        object.__setattr__(self, "values", z)

    def __len__(self) -> int:
        return int(self.values.size)


def as_centers(centers) -> Centers:
    return centers if isinstance(centers, Centers) else Centers(centers)


def dd_weights(centers) -> np.ndarray:
    """Weights w with f[z_1, ..., z_r] = sum_i w_i f(z_i)."""
    z = as_centers(centers).values
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def divided_difference_table(f_values, centers) -> np.ndarray:
    """Upper-left triangle of the recursive table; row 0 holds f[z_1..z_j]."""
    z = as_centers(centers).values
    f = np.asarray(f_values, dtype=np.float64).reshape(-1)
    if f.size != z.size:
        raise DomainError(f"{f.size} values for {z.size} centers")
    r = z.size
    coef = np.zeros((r, r))
    coef[:, 0] = f
    for j in range(1, r):
        coef[: r - j, j] = (coef[1: r - j + 1, j - 1] - coef[: r - j, j - 1]) / (z[j:] - z[: r - j])
    return coef


def divided_difference(f_values, centers, method: str = "weights") -> float:
    """Order r - 1 divided difference of f over the centers.

    ``method`` is ``"weights"`` (default) or ``"recursive"``.
    """
    cs = as_centers(centers)
    f = np.asarray(f_values, dtype=np.float64).reshape(-1)
    if f.size != len(cs):
        raise DomainError(f"{f.size} values for {len(cs)} centers")
    if method == "weights":
        return float(dd_weights(cs) @ f)
    if method == "recursive":
        return float(divided_difference_table(f, cs)[0, -1])
    raise DomainError(f"unknown divided difference method {method!r}")


def newton_poly_eval(x, centers=()) -> np.ndarray | float:
    """eta(x; t_1..t_r) = prod_j (x - t_j); the empty product is 1."""
    t = np.asarray(centers, dtype=np.float64).reshape(-1) if not isinstance(centers, Centers) else centers.values
    xs = np.asarray(x, dtype=np.float64)
    out = np.prod(xs[..., None] - t, axis=-1) if t.size else np.ones_like(xs)
    return float(out) if out.ndim == 0 else out


def newton_coefficients(values, centers) -> np.ndarray:
    """Newton-form coefficients p[t_1], p[t_1, t_2], ..."""
    return divided_difference_table(values, centers)[0].copy()


def newton_interpolate(values, centers, x) -> np.ndarray | float:
    """Evaluate the interpolating polynomial in Newton form by nested multiplication."""
    cs = as_centers(centers)
    coef = newton_coefficients(values, cs)
    t = cs.values
    xs = np.asarray(x, dtype=np.float64)
    out = np.full_like(xs, coef[-1])
    for j in range(coef.size - 2, -1, -1):
        out = coef[j] + (xs - t[j]) * out
    return float(out) if out.ndim == 0 else out


def lagrange_matrix(nodes, targets) -> np.ndarray:
    """Matrix P with P @ p(nodes) = p(targets) for every polynomial of degree < len(nodes)."""
    z = as_centers(nodes).values
    t = np.asarray(targets, dtype=np.float64).reshape(-1)
    w = dd_weights(z)
    P = np.empty((t.size, z.size))
    for i, ti in enumerate(t):
        hit = np.flatnonzero(ti == z)
        if hit.size:
            P[i] = 0.0
            P[i, hit[0]] = 1.0
            continue
        # barycentric form: l_j(t) = eta(t) w_j / (t - z_j)
        P[i] = np.prod(ti - z) * w / (ti - z)
    return P
