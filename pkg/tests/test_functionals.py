import numpy as np
import pytest

from src.functionals import (
    basis_distance_bound,
    basis_distance_check,
    k_matrix_inv,
    sobolev_functional,
    sobolev_quadrature,
    sobolev_V,
    spectral_similarity_check,
    tv_from_coefficients,
    tv_functional,
    tv_jump_sum,
)
from src.grid import DesignGrid
from src.utils.errors import DomainError, UnsupportedError


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_total_variation_forms_agree(k):
    rng = np.random.default_rng(k)
    grid = DesignGrid.random(30, rng)
    theta = rng.standard_normal(grid.n)
    tv = tv_functional(theta, grid, k)
    assert tv_jump_sum(theta, grid, k) == pytest.approx(tv, rel=1e-9)
    assert tv_from_coefficients(theta, grid, k) == pytest.approx(tv, rel=1e-9)


def test_degree_zero_total_variation_is_sum_of_absolute_differences():
    grid = DesignGrid.uniform(5)
    theta = np.array([0.0, 2.0, 1.0, 1.0, 4.0])
    assert tv_functional(theta, grid, 0) == pytest.approx(6.0)


def test_total_variation_vanishes_on_polynomials():
    grid = DesignGrid.random(20, np.random.default_rng(2))
    theta = 1.0 + grid.points - grid.points ** 2
    assert tv_functional(theta, grid, 2) == pytest.approx(0.0, abs=1e-8)
    with pytest.raises(DomainError):
        tv_functional(theta[:-1], grid, 2)


def test_cubic_sobolev_matrix_on_uniform_grid():
    n, v = 12, 0.25
    grid = DesignGrid(np.arange(n) * v)
    mats = sobolev_V(grid, 2)
    size = n - 2
    expected = (np.diag(np.full(size, 8.0 / 3.0)) + np.diag(np.full(size - 1, -5.0 / 6.0), 1)
                + np.diag(np.full(size - 1, -5.0 / 6.0), -1))
    expected[0, 0], expected[0, 1], expected[1, 0] = 3.0, -1.5, -1.5
    expected[1, 1], expected[-1, -1] = 10.0 / 3.0, 7.0 / 3.0
    assert np.allclose(mats.V.to_dense(), expected * v, atol=1e-9)
    assert mats.band_residual <= 1e-9
    assert (mats.V.lower_bw, mats.V.upper_bw) == (1, 1)


def test_linear_sobolev_matrix_is_diagonal_of_gaps():
    grid = DesignGrid.random(15, np.random.default_rng(5))
    V = sobolev_V(grid, 1).V.to_dense()
    assert np.allclose(V, np.diag(grid.gaps))
    theta = np.random.default_rng(6).standard_normal(grid.n)
    assert sobolev_functional(theta, grid, 1) == pytest.approx(np.sum(np.diff(theta) ** 2 / grid.gaps))


@pytest.mark.parametrize("m", [1, 2])
def test_sobolev_form_matches_quadrature(m):
    rng = np.random.default_rng(30 + m)
    grid = DesignGrid.random(25, rng)
    theta = rng.standard_normal(grid.n)
    exact = sobolev_quadrature(theta, grid, m)
    assert sobolev_functional(theta, grid, m) == pytest.approx(exact, rel=1e-6, abs=1e-6)
    assert sobolev_V(grid, m).band_residual <= 1e-9


def test_sobolev_rejects_too_large_order():
    with pytest.raises(DomainError):
        sobolev_V(DesignGrid.uniform(4), 3)


def test_k_matrix_on_uniform_grid():
    n, v = 10, 0.5
    grid = DesignGrid(np.arange(n) * v)
    K = k_matrix_inv(grid, 2).to_dense()
    assert np.allclose(np.diag(K), 2.0 / (3.0 * v))
    assert np.allclose(np.diag(K, 1), 1.0 / (6.0 * v))
    assert np.allclose(k_matrix_inv(grid, 1).to_dense(), np.eye(n - 1) / v)
    with pytest.raises(UnsupportedError):
        k_matrix_inv(grid, 3)


def test_spectral_ratio_stays_between_one_third_and_one():
    for grid in (DesignGrid.uniform(80), DesignGrid.random(80, np.random.default_rng(8))):
        lo, hi = spectral_similarity_check(grid, seed=1)
        assert lo >= 1.0 / 3.0 - 1e-9
        assert hi <= 1.0 + 1e-9


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_falling_factorial_columns_approach_truncated_powers(k):
    grid = DesignGrid.random(40, np.random.default_rng(k))
    distance = basis_distance_check(grid, k, mesh=400)
    assert distance <= basis_distance_bound(grid, k) + 1e-15
    if k < 2:
        assert distance == pytest.approx(0.0, abs=1e-15)
