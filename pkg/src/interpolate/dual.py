"""Dual basis coefficients and discrete spline interpolation.

Given values theta at the design points, the degree-k discrete spline
interpolant has falling factorial coefficients alpha = H^{-1} theta, and
off-grid it can be evaluated either from alpha (explicit form, O(n) per
query) or from the k + 1 neighbouring values alone (implicit form, O(k)
after a binary search): the unknown f(x) is the value that makes the
order k + 1 divided difference over those neighbours and x vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..basis.falling_factorial import FFBasisSpec, ffb_matrix
from ..basis.transforms import fast_h_mult
from ..divided.newton import dd_weights
from ..utils.config import DEFAULT_NUMERICS, NumericsConfig
from ..utils.errors import DomainError, UnsupportedError


@dataclass(frozen=True, eq=False)
class DiscreteSplineFit:
    """Values and falling factorial coefficients of one discrete spline.

    ``alpha`` is indexed like ``spec.columns``; ``active_knots`` holds the
    zero-based design positions where the k-th discrete derivative jumps.
    """
    spec: FFBasisSpec
    theta: np.ndarray
    alpha: np.ndarray
    active_knots: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __post_init__(self):
        theta = np.array(self.theta, dtype=np.float64).reshape(-1)
        alpha = np.array(self.alpha, dtype=np.float64).reshape(-1)
        if theta.size != self.spec.n:
            raise DomainError(f"theta has length {theta.size}, expected {self.spec.n}")
        if alpha.size != self.spec.dim:
            raise DomainError(f"alpha has length {alpha.size}, expected {self.spec.dim}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "active_knots", np.asarray(self.active_knots, dtype=np.int64))

    @classmethod
    def from_values(cls, theta, spec: FFBasisSpec,
                    numerics: NumericsConfig = DEFAULT_NUMERICS) -> "DiscreteSplineFit":
        alpha = dual_coefficients(theta, spec)
        tail = alpha[spec.degree + 1:]
        tol = numerics.active_tol * max(1.0, float(np.abs(tail).max(initial=0.0)))
        knots = np.flatnonzero(np.abs(tail) > tol) + spec.degree
        return cls(spec, theta, alpha, knots)

    def __call__(self, x, mode: str = "explicit"):
        if mode == "explicit":
            return interp_explicit(self, x)
        if mode == "implicit":
            return interp_implicit(self.theta, self.spec, x)
        raise DomainError(f"unknown interpolation mode {mode!r}")


def dual_coefficients(theta, spec: FFBasisSpec) -> np.ndarray:
    """alpha = H^{-1} theta by the in-place fast transform.

    Entries are the dual functionals applied to the interpolant: the
    (k+1)-st discrete derivative at x_i, weighted by (x_i - x_{i-k-1}) / (k+1)
    past the first k + 1.
    """
    if not spec.is_dense:
        raise UnsupportedError("dual coefficients are defined for the dense knot set")
    alpha = np.array(theta, dtype=np.float64).reshape(-1)
    if alpha.size != spec.n:
        raise DomainError(f"theta has length {alpha.size}, expected {spec.n}")
    return fast_h_mult(spec, alpha, "H_inv")


def interp_explicit(fit: DiscreteSplineFit, x):
    """sum_j alpha_j h_j(x) over the fit's basis columns."""
    xs = np.atleast_1d(fit.spec.grid.check_domain(x))
    out = ffb_matrix(fit.spec, xs) @ fit.alpha
    return float(out[0]) if np.ndim(x) == 0 else out


def _implicit_one(theta, points, k, x, guard):
    near = int(np.argmin(np.abs(points - x)))
    if abs(points[near] - x) < guard:
        return float(theta[near])
    n = points.size
    if x > points[k]:
        i = min(int(np.searchsorted(points, x, side="right")), n - 1)
        lo, hi = i - k, i + 1
    else:
        lo, hi = 0, k + 1
    w = dd_weights(np.append(points[lo:hi], x))
    return -float(w[:-1] @ theta[lo:hi]) / w[-1]


def interp_implicit(theta, spec: FFBasisSpec, x, numerics: NumericsConfig = DEFAULT_NUMERICS):
    """Evaluate the interpolant from the k + 1 nearest design values.

    Beyond x_n the last polynomial piece is extended. Queries within
    ``node_guard * (b - a)`` of a design point return the stored value.
    """
    grid = spec.grid
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.size != grid.n:
        raise DomainError(f"theta has length {theta.size}, expected {grid.n}")
    xs = np.atleast_1d(grid.check_domain(x))
    guard = numerics.node_guard * (grid.b - grid.a)
    out = np.array([_implicit_one(theta, grid.points, spec.degree, float(xi), guard) for xi in xs])
    return float(out[0]) if np.ndim(x) == 0 else out
