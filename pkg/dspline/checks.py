"""Numerical self-checks run by ``dspline check``.

Every check returns a measured deviation and the tolerance it must stay
under; a suite fails when any of its checks does.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.basis import FFBasisSpec, FlopCounter, fast_h_mult, ffb_deriv_matrix, ffb_inverse_sparse, ffb_matrix
from src.basis import flop_bound, lateral_recursion_check, verify_inverse_identity
from src.calculus import GridFunction, apply_discrete_integ, discrete_deriv
from src.data import heterogeneous_signal
from src.functionals import (
    basis_distance_bound,
    basis_distance_check,
    k_matrix_inv,
    sobolev_functional,
    sobolev_quadrature,
    sobolev_V,
    spectral_similarity_check,
    tv_functional,
    tv_jump_sum,
)
from src.grid import DesignGrid
from src.interpolate import DiscreteSplineFit, interp_implicit
from src.solvers import ss_bw_distance_check
from src.utils.logs import kv

from .metrics import relative_deviation

logger = logging.getLogger(__name__)

SUITES = ("identities", "representation", "interpolation", "all")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    value: float
    tol: float
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tol)


def _grids(rng: np.random.Generator, sizes) -> list[DesignGrid]:
    out = []
    for n in sizes:
        out.append(DesignGrid.uniform(n))
        out.append(DesignGrid.random(n, rng))
    return out


# identities

def inverse_identity(rng) -> tuple[float, float]:
    worst = 0.0
    for grid in _grids(rng, (10, 50, 200)):
        for k in range(4):
            worst = max(worst, verify_inverse_identity(grid, k))
    return worst, 1e-8


def operator_inverse(rng) -> tuple[float, float]:
    worst = 0.0
    for rep in range(100):
        n = int(rng.choice([5, 20, 50]))
        k = int(rng.integers(1, 4))
        grid = DesignGrid.random(n, rng)
        x = float(rng.uniform(grid.a, grid.b))
        f = GridFunction(grid, rng.standard_normal(n), (x, float(rng.standard_normal())))
        integ = apply_discrete_integ(f, k)
        worst = max(worst, relative_deviation(discrete_deriv(integ, k, x), f.extra[1]))
    return worst, 1e-8


def fast_transforms(rng) -> tuple[float, float]:
    n, k = 500, 3
    grid = DesignGrid.random(n, rng)
    spec = FFBasisSpec(k, grid)
    H = ffb_matrix(spec)
    A = ffb_inverse_sparse(grid, k)
    v = rng.standard_normal(n)
    oracles = {"H": H @ v, "H_inv": A @ v, "H_T": H.T @ v, "H_inv_T": A.T @ v}
    worst = 0.0
    for variant, expected in oracles.items():
        counter = FlopCounter()
        got = fast_h_mult(spec, v.copy(), variant, counter)
        if counter.flops > flop_bound(n, k):
            return float("inf"), 1e-10
        worst = max(worst, relative_deviation(got, expected))
    return worst, 1e-10


def lateral_recursion(rng) -> tuple[float, float]:
    worst = max(lateral_recursion_check(grid, k) for grid in _grids(rng, (30,)) for k in (1, 2, 3))
    return worst, 1e-9


# representation

def tv_identity(rng) -> tuple[float, float]:
    worst = 0.0
    for rep in range(100):
        grid = DesignGrid.random(int(rng.integers(8, 40)), rng)
        k = int(rng.integers(0, 4))
        theta = rng.standard_normal(grid.n)
        worst = max(worst, relative_deviation(tv_functional(theta, grid, k), tv_jump_sum(theta, grid, k)))
    return worst, 1e-10


def sobolev_tables(rng) -> tuple[float, float]:
    n, v = 12, 0.25
    grid = DesignGrid(np.arange(n) * v)
    V2 = sobolev_V(grid, 2).V.to_dense()
    size = n - 2
    expected = np.diag(np.full(size, 8.0 / 3.0)) + np.diag(np.full(size - 1, -5.0 / 6.0), 1)
    expected += np.diag(np.full(size - 1, -5.0 / 6.0), -1)
    expected[0, 0], expected[0, 1], expected[1, 0] = 3.0, -1.5, -1.5
    expected[1, 1], expected[-1, -1] = 10.0 / 3.0, 7.0 / 3.0
    worst = relative_deviation(V2, expected * v)
    rand = DesignGrid.random(15, rng)
    worst = max(worst, relative_deviation(sobolev_V(rand, 1).V.to_dense(), np.diag(np.diff(rand.points))))
    K2 = k_matrix_inv(grid, 2).to_dense()
    K2_expected = (np.diag(np.full(size, 2.0 / 3.0)) + np.diag(np.full(size - 1, 1.0 / 6.0), 1)
                   + np.diag(np.full(size - 1, 1.0 / 6.0), -1)) / v
    return max(worst, relative_deviation(K2, K2_expected)), 1e-9


def sobolev_quadrature_agreement(rng) -> tuple[float, float]:
    worst = 0.0
    for rep in range(10):
        grid = DesignGrid.random(int(rng.integers(10, 41)), rng)
        for m in (1, 2):
            theta = rng.standard_normal(grid.n)
            exact = sobolev_quadrature(theta, grid, m)
            worst = max(worst, abs(sobolev_functional(theta, grid, m) - exact) / max(1.0, abs(exact)))
    return worst, 1e-6


def sobolev_bandwidth(rng) -> tuple[float, float]:
    worst = 0.0
    for grid in _grids(rng, (20, 60)):
        for m in (1, 2):
            worst = max(worst, sobolev_V(grid, m).band_residual)
    return worst, 1e-9


def spectral_similarity(rng) -> tuple[float, float]:
    worst = 0.0
    for grid in _grids(rng, (50, 120)):
        lo, hi = spectral_similarity_check(grid, seed=int(rng.integers(2**31)))
        worst = max(worst, 1.0 / 3.0 - lo, hi - 1.0)
    return max(worst, 0.0), 1e-9


def ss_bw_bound(rng) -> tuple[float, float]:
    worst = 0.0
    for rep in range(20):
        data, _ = heterogeneous_signal(100, rng)
        lam_a = float(10.0 ** rng.uniform(-7, -3))
        lhs, rhs = ss_bw_distance_check(data.y, data.grid(), lam_a, 3.0 * lam_a)
        worst = max(worst, (lhs - rhs) / max(1.0, rhs))
    return max(worst, 0.0), 1e-9


def basis_distance(rng) -> tuple[float, float]:
    worst = 0.0
    for grid in _grids(rng, (50,)):
        for k in (2, 3):
            worst = max(worst, basis_distance_check(grid, k) - basis_distance_bound(grid, k))
    return max(worst, 0.0), 1e-12


# interpolation

def interpolation_modes(rng) -> tuple[float, float]:
    worst = 0.0
    for rep in range(10):
        grid = DesignGrid.random(int(rng.integers(10, 60)), rng)
        spec = FFBasisSpec(int(rng.integers(0, 4)), grid)
        fit = DiscreteSplineFit.from_values(rng.standard_normal(grid.n), spec)
        xs = rng.uniform(grid.a, grid.b, 50)
        worst = max(worst, relative_deviation(fit(xs, "explicit"), fit(xs, "implicit")))
    return worst, 1e-8


def interpolation_reproduction(rng) -> tuple[float, float]:
    worst = 0.0
    for k in range(4):
        grid = DesignGrid.random(30, rng)
        spec = FFBasisSpec(k, grid)
        fit = DiscreteSplineFit.from_values(rng.standard_normal(grid.n), spec)
        worst = max(worst, relative_deviation(fit(grid.points, "explicit"), fit.theta))
        worst = max(worst, relative_deviation(interp_implicit(fit.theta, spec, grid.points), fit.theta))
    return worst, 1e-10


def matching_derivatives(rng) -> tuple[float, float]:
    worst = 0.0
    for rep in range(50):
        grid = DesignGrid.random(25, rng)
        k = int(rng.integers(1, 4))
        spec = FFBasisSpec(k, grid)
        alpha = rng.standard_normal(grid.n)
        values = ffb_matrix(spec) @ alpha
        xs = rng.uniform(grid.points[k - 1], grid.b, 4)
        xs = xs[xs > grid.points[k - 1]]
        fx = ffb_matrix(spec, xs) @ alpha
        analytic = ffb_deriv_matrix(spec, k, xs) @ alpha
        for x, f_x, d_x in zip(xs, fx, analytic):
            got = discrete_deriv(GridFunction(grid, values, (float(x), float(f_x))), k, float(x))
            worst = max(worst, relative_deviation(got, d_x))
    return worst, 1e-8


REGISTRY: dict[str, list[Callable]] = {
    "identities": [inverse_identity, operator_inverse, fast_transforms, lateral_recursion],
    "representation": [tv_identity, sobolev_tables, sobolev_quadrature_agreement, sobolev_bandwidth,
                       spectral_similarity, ss_bw_bound, basis_distance],
    "interpolation": [interpolation_modes, interpolation_reproduction, matching_derivatives],
}


def run_suite(suite: str, seed: int = 0) -> list[CheckResult]:
    """Run one suite (or ``"all"``) with a fixed seed per check."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}, expected one of {SUITES}")
    names = [s for s in REGISTRY if suite in (s, "all")]
    results = []
    for name in names:
        for check in REGISTRY[name]:
            rng = np.random.default_rng([seed, len(results)])
            start = time.perf_counter()
            value, tol = check(rng)
            res = CheckResult(name, check.__name__, float(value), tol, time.perf_counter() - start)
            logger.info(kv("CHECK", suite=name, name=res.name, value=res.value, tol=tol,
                           passed=res.passed, seconds=res.seconds))
            results.append(res)
    return results
