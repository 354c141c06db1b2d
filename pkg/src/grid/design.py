"""Design grids: sorted distinct abscissae inside an interval [a, b]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..utils.errors import DomainError


@dataclass(frozen=True, eq=False)
class DesignGrid:
    """Design points x_1 < ... < x_n with a <= x_1 and x_n <= b.

    ``points`` is stored as a read-only float64 array. ``a`` and ``b``
    default to the first and last design point.
    """
    points: np.ndarray
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64).reshape(-1)
        if pts.size < 2:
            raise DomainError(f"a design grid needs at least 2 points, got {pts.size}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("design points must be finite")
        gaps = np.diff(pts)
        if np.any(gaps <= 0):
            bad = int(np.argmin(gaps))
            raise DomainError(
                f"design points must be strictly increasing: x[{bad}]={pts[bad]!r}, x[{bad + 1}]={pts[bad + 1]!r}"
            )
        a = float(pts[0]) if self.a is None else float(self.a)
        b = float(pts[-1]) if self.b is None else float(self.b)
        if a > pts[0] or b < pts[-1]:
            raise DomainError(f"interval [{a}, {b}] must contain [{pts[0]}, {pts[-1]}]")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def uniform(cls, n: int, a: float = 0.0, b: float = 1.0) -> "DesignGrid":
        """Evenly spaced points with x_1 = a and x_n = b."""
        return cls(np.linspace(a, b, n), a, b)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, a: float = 0.0, b: float = 1.0,
               spacing_ratio: float = 10.0) -> "DesignGrid":
        """Random design with x_1 = a, x_n = b and max/min gap at most ``spacing_ratio``."""
        gaps = rng.uniform(1.0, spacing_ratio, size=n - 1)
        pts = np.concatenate([[0.0], np.cumsum(gaps)])
        pts = a + (b - a) * pts / pts[-1]
        pts[-1] = b
        return cls(pts, a, b)

    @classmethod
    def uniform_random(cls, n: int, rng: np.random.Generator, a: float = 0.0, b: float = 1.0) -> "DesignGrid":
        """Sorted i.i.d. uniform draws on [a, b]."""
        while True:
            pts = np.sort(rng.uniform(a, b, size=n))
            if np.all(np.diff(pts) > 0):
                return cls(pts, a, b)

    @property
    def n(self) -> int:
        return int(self.points.size)

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.points)

    @property
    def max_gap(self) -> float:
        return float(self.gaps.max())

    @property
    def spacing_ratio(self) -> float:
        g = self.gaps
        return float(g.max() / g.min())

    @property
    def extended(self) -> np.ndarray:
        """Design points followed by the sentinel x_{n+1} = b."""
        return np.append(self.points, self.b)

    def check_domain(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=np.float64)
        if np.any(~np.isfinite(xs)) or np.any(xs < self.a) or np.any(xs > self.b):
            raise DomainError(f"query {x!r} outside [{self.a}, {self.b}]")
        return xs

    def locate(self, x: float) -> int:
        """Index i with x in (x_i, x_{i+1}] (one-based i; 0 when x <= x_1)."""
        return locate(self, x)


def locate(grid: DesignGrid, x: float) -> int:
    """Interval index of ``x`` under the half-open convention (x_i, x_{i+1}].

    Returns 0 for x <= x_1, i - 1 when x equals the design point x_i
    (one-based), and n for x in (x_n, b].
    """
    grid.check_domain(x)
    return int(np.searchsorted(grid.points, float(x), side="left"))


def locate_many(grid: DesignGrid, xs) -> np.ndarray:
    xs = grid.check_domain(xs)
    return np.searchsorted(grid.points, xs, side="left")
