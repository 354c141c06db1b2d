import numpy as np
import pytest

from src.basis import FFBasisSpec
from src.grid import DesignGrid
from src.interpolate import DiscreteSplineFit, dual_coefficients, interp_implicit
from src.utils.errors import DomainError, UnsupportedError


def _grid(n=20, seed=0, b=None):
    grid = DesignGrid.random(n, np.random.default_rng(seed))
    return grid if b is None else DesignGrid(grid.points, grid.a, b)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_interpolant_passes_through_design_values(k):
    grid = _grid(seed=k)
    theta = np.random.default_rng(k).standard_normal(grid.n)
    fit = DiscreteSplineFit.from_values(theta, FFBasisSpec(k, grid))
    assert np.allclose(fit(grid.points, "explicit"), theta, atol=1e-10)
    assert np.allclose(fit(grid.points, "implicit"), theta, atol=1e-10)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_explicit_and_implicit_forms_agree(k):
    rng = np.random.default_rng(20 + k)
    grid = _grid(30, seed=k)
    fit = DiscreteSplineFit.from_values(rng.standard_normal(grid.n), FFBasisSpec(k, grid))
    xs = rng.uniform(grid.a, grid.b, 40)
    assert np.allclose(fit(xs, "explicit"), fit(xs, "implicit"), atol=1e-8)


def test_polynomials_are_reproduced_including_past_last_point():
    grid = _grid(15, seed=5, b=1.5)
    spec = FFBasisSpec(2, grid)
    poly = lambda x: 1.0 - 2.0 * x + 3.0 * x ** 2
    fit = DiscreteSplineFit.from_values(poly(grid.points), spec)
    assert fit.active_knots.size == 0
    xs = np.array([0.05, 0.5, 0.95, 1.2, 1.5])
    assert np.allclose(fit(xs, "explicit"), poly(xs), atol=1e-9)
    assert np.allclose(interp_implicit(fit.theta, spec, xs), poly(xs), atol=1e-9)


def test_hinge_has_single_active_knot():
    grid = DesignGrid.uniform(12)
    x5 = grid.points[5]
    theta = np.maximum(grid.points - x5, 0.0)
    fit = DiscreteSplineFit.from_values(theta, FFBasisSpec(1, grid))
    assert fit.active_knots.tolist() == [5]
    mid = 0.5 * (grid.points[6] + grid.points[7])
    assert fit(mid) == pytest.approx(mid - x5)


def test_scalar_query_returns_float():
    grid = DesignGrid.uniform(6)
    fit = DiscreteSplineFit.from_values(np.arange(6.0), FFBasisSpec(1, grid))
    assert isinstance(fit(0.3), float)
    assert isinstance(interp_implicit(fit.theta, fit.spec, 0.3), float)


def test_invalid_queries_raise():
    grid = DesignGrid.uniform(6)
    spec = FFBasisSpec(1, grid)
    fit = DiscreteSplineFit.from_values(np.arange(6.0), spec)
    with pytest.raises(DomainError):
        fit(1.5)
    with pytest.raises(DomainError):
        fit(0.5, "nearest")
    with pytest.raises(DomainError):
        interp_implicit(np.arange(5.0), spec, 0.5)
    with pytest.raises(UnsupportedError):
        dual_coefficients(np.arange(6.0), FFBasisSpec(1, grid, [2]))
