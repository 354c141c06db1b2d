"""Discrete derivatives and discrete integrals of functions known on a grid.

A function enters through its n values at the design points plus, for an
off-grid query x, one more evaluation f(x). With i = locate(x), so that
x lies in (x_i, x_{i+1}] (one-based):

    (Delta^k f)(x) = k! f[x_{i-k+1}, ..., x_i, x]    i >= k
                   = i! f[x_1, ..., x_i, x]          0 < i < k
                   = f(x)                            i = 0

and S^k is its two-sided inverse. The explicit forms below use divided
difference weights and falling factorial columns; the recursive forms
compose simple differences, weight maps and cumulative sums and are kept
for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable

import numpy as np

from ..basis.falling_factorial import ff_column
from ..divided.newton import dd_weights
from ..grid.design import DesignGrid, locate
from ..utils.errors import DomainError


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values f(x_1), ..., f(x_n) with an optional off-grid pair (x, f(x))."""
    grid: DesignGrid
    values: np.ndarray
    extra: tuple[float, float] | None = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64).reshape(-1)
        if vals.size != self.grid.n:
            raise DomainError(f"{vals.size} values for a grid of {self.grid.n} points")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.extra is not None:
            x, fx = float(self.extra[0]), float(self.extra[1])
            self.grid.check_domain(x)
            object.__setattr__(self, "extra", (x, fx))

    @classmethod
    def from_callable(cls, grid: DesignGrid, func: Callable, x: float | None = None) -> "GridFunction":
        vals = np.asarray(func(grid.points), dtype=np.float64)
        extra = None if x is None else (float(x), float(func(np.float64(x))))
        return cls(grid, vals, extra)

    def with_extra(self, x: float, fx: float) -> "GridFunction":
        return GridFunction(self.grid, self.values, (x, fx))

    def grid_index(self, x: float) -> int | None:
        """Zero-based position of x among the design points, or None."""
        pts = self.grid.points
        i = int(np.searchsorted(pts, x))
        if i < pts.size and pts[i] == x:
            return i
        return None

    def value_at(self, x: float) -> float:
        i = self.grid_index(x)
        if i is not None:
            return float(self.values[i])
        if self.extra is not None and self.extra[0] == x:
            return self.extra[1]
        raise DomainError(f"f({x!r}) is unknown: supply it as the extra evaluation")


def _check_order(f: GridFunction, k: int) -> int:
    k = int(k)
    if k < 0 or k > f.grid.n - 1:
        raise DomainError(f"order {k} outside [0, {f.grid.n - 1}]")
    return k


def discrete_deriv(f: GridFunction, k: int, x: float) -> float:
    """(Delta^k_n f)(x) through the divided difference weights."""
    k = _check_order(f, k)
    s = locate(f.grid, x)
    fx = f.value_at(x)
    if s == 0 or k == 0:
        return fx
    pts = f.grid.points
    lo = s - k if s >= k else 0
    q = min(s, k)
    centers = np.append(pts[lo:s], x)
    vals = np.append(f.values[lo:s], fx)
    return factorial(q) * float(dd_weights(centers) @ vals)


def discrete_integ(f: GridFunction, k: int, x: float) -> float:
    """(S^k_n f)(x) as a linear combination of degree k - 1 falling factorial values.

    No cumulative sums are formed: the design-point values enter with
    weights h^{k-1}_c(x) (x_c - x_{c-k}) / k and f(x) enters through the
    column that switches on at x.
    """
    k = _check_order(f, k)
    s = locate(f.grid, x)
    fx = f.value_at(x)
    if s == 0 or k == 0:
        return fx
    pts, v = f.grid.points, f.values
    d = k - 1
    if s < k:
        total = sum(float(ff_column(pts, d, c, x)) * v[c] for c in range(s))
        return total + float(ff_column(pts, d, s, x)) * fx
    total = sum(float(ff_column(pts, d, c, x)) * v[c] for c in range(k))
    for c in range(k, s):
        total += float(ff_column(pts, d, c, x)) * (pts[c] - pts[c - k]) / k * v[c]
    return total + float(ff_column(pts, d, s, x)) * (x - pts[s - k]) / k * fx


# Recursive forms. Each step maps (design values, extra value) to the same
# pair; ``s`` is locate(x) for the extra point, or None without one.

def _diff_step(v, fx, s, c):
    out = v.copy()
    out[c:] = v[c:] - v[c - 1:-1]
    if fx is not None and s >= c:
        fx = fx - v[s - 1]
    return out, fx


def _cumsum_step(v, fx, s, c):
    out = v.copy()
    out[c - 1:] = np.cumsum(v[c - 1:])
    if fx is not None and s >= c:
        fx = fx + out[s - 1]
    return out, fx


def _weight_step(v, fx, s, x, pts, q, inverse):
    w = (pts[q:] - pts[:-q]) / q
    out = v.copy()
    out[q:] = v[q:] / w if inverse else v[q:] * w
    if fx is not None and s >= q:
        wx = (x - pts[s - q]) / q
        fx = fx / wx if inverse else fx * wx
    return out, fx


def _split(f: GridFunction):
    if f.extra is None:
        return None, None, None
    x, fx = f.extra
    return x, fx, locate(f.grid, x)


def apply_discrete_deriv(f: GridFunction, k: int) -> GridFunction:
    """Delta^k_n f at every design point (and the extra point) by the difference recursion."""
    k = _check_order(f, k)
    pts = f.grid.points
    x, fx, s = _split(f)
    v = f.values.copy()
    for q in range(1, k + 1):
        v, fx = _diff_step(v, fx, s, q)
        v, fx = _weight_step(v, fx, s, x, pts, q, inverse=True)
    return GridFunction(f.grid, v, None if x is None else (x, fx))


def apply_discrete_integ(f: GridFunction, k: int) -> GridFunction:
    """S^k_n f at every design point (and the extra point) by weighted cumulative sums."""
    k = _check_order(f, k)
    pts = f.grid.points
    x, fx, s = _split(f)
    v = f.values.copy()
    for q in range(k, 0, -1):
        v, fx = _weight_step(v, fx, s, x, pts, q, inverse=False)
        v, fx = _cumsum_step(v, fx, s, q)
    return GridFunction(f.grid, v, None if x is None else (x, fx))


def discrete_deriv_recursive(f: GridFunction, k: int, x: float) -> float:
    f.grid.check_domain(x)
    return apply_discrete_deriv(f, k).value_at(x)


def discrete_integ_recursive(f: GridFunction, k: int, x: float) -> float:
    f.grid.check_domain(x)
    return apply_discrete_integ(f, k).value_at(x)
