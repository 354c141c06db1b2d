import numpy as np
import pytest

from src.calculus import (
    GridFunction,
    apply_discrete_deriv,
    apply_discrete_integ,
    discrete_deriv,
    discrete_deriv_recursive,
    discrete_integ,
    discrete_integ_recursive,
)
from src.grid import DesignGrid
from src.utils.errors import DomainError


def _random_grid(n, seed=0):
    return DesignGrid.random(n, np.random.default_rng(seed))


def test_order_zero_is_the_function_itself():
    grid = DesignGrid.uniform(6)
    f = GridFunction(grid, np.arange(6.0), (0.33, 7.0))
    assert discrete_deriv(f, 0, 0.33) == 7.0
    assert discrete_integ(f, 0, 0.33) == 7.0


def test_derivative_of_monomial_is_factorial_past_first_points():
    grid = _random_grid(12)
    f = GridFunction.from_callable(grid, lambda x: x ** 2, x=0.8)
    assert discrete_deriv(f, 2, 0.8) == pytest.approx(2.0)
    assert discrete_deriv(f, 2, float(grid.points[7])) == pytest.approx(2.0)
    assert discrete_deriv(f, 1, float(grid.points[0])) == pytest.approx(0.0)


def test_explicit_and_recursive_forms_agree():
    rng = np.random.default_rng(1)
    grid = _random_grid(15, seed=1)
    for k in range(4):
        x = float(rng.uniform(grid.a, grid.b))
        f = GridFunction(grid, rng.standard_normal(grid.n), (x, float(rng.standard_normal())))
        assert discrete_deriv(f, k, x) == pytest.approx(discrete_deriv_recursive(f, k, x), abs=1e-8)
        assert discrete_integ(f, k, x) == pytest.approx(discrete_integ_recursive(f, k, x), abs=1e-8)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_integration_inverts_differentiation(k):
    rng = np.random.default_rng(k)
    grid = _random_grid(20, seed=k)
    x = float(rng.uniform(grid.a, grid.b))
    f = GridFunction(grid, rng.standard_normal(grid.n), (x, 0.5))
    back = apply_discrete_deriv(apply_discrete_integ(f, k), k)
    assert np.allclose(back.values, f.values, atol=1e-8)
    assert back.extra[1] == pytest.approx(0.5, abs=1e-8)
    forth = apply_discrete_integ(apply_discrete_deriv(f, k), k)
    assert np.allclose(forth.values, f.values, atol=1e-8)


def test_missing_off_grid_value_and_bad_order_raise():
    grid = DesignGrid.uniform(5)
    f = GridFunction(grid, np.zeros(5))
    with pytest.raises(DomainError):
        discrete_deriv(f, 1, 0.3)
    with pytest.raises(DomainError):
        discrete_deriv(f.with_extra(0.3, 1.0), 5, 0.3)
    with pytest.raises(DomainError):
        GridFunction(grid, np.zeros(4))
