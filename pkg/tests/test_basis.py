import numpy as np
import pytest

from src.basis import (
    FFBasisSpec,
    FlopCounter,
    discrete_deriv_sparse,
    fast_h_mult,
    ffb_deriv_eval,
    ffb_inverse_sparse,
    ffb_matrix,
    flop_bound,
    lateral_recursion_check,
    penalty_matrix_C,
    verify_inverse_identity,
    weighted_deriv_sparse,
)
from src.grid import DesignGrid
from src.utils.errors import DomainError, UnsupportedError


def test_degree_zero_basis_is_lower_triangular_ones():
    grid = DesignGrid.random(8, np.random.default_rng(0))
    H = ffb_matrix(FFBasisSpec(0, grid))
    assert np.allclose(H, np.tril(np.ones((8, 8))))


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_sparse_inverse_inverts_dense_basis(k):
    rng = np.random.default_rng(10 + k)
    for grid in (DesignGrid.uniform(40), DesignGrid.random(40, rng)):
        assert verify_inverse_identity(grid, k) <= 1e-8


@pytest.mark.parametrize("k", [0, 1, 3])
def test_fast_transforms_match_dense_products_in_linear_flops(k):
    rng = np.random.default_rng(4)
    n = 60
    grid = DesignGrid.random(n, rng)
    spec = FFBasisSpec(k, grid)
    H = ffb_matrix(spec)
    H_inv = ffb_inverse_sparse(grid, k).toarray()
    v = rng.standard_normal(n)
    expected = {"H": H @ v, "H_inv": H_inv @ v, "H_T": H.T @ v, "H_inv_T": H_inv.T @ v}
    for variant, target in expected.items():
        counter = FlopCounter()
        out = fast_h_mult(spec, v.copy(), variant, counter)
        assert np.allclose(out, target, atol=1e-9)
        assert counter.flops <= flop_bound(n, k)
        assert counter.flops <= (4 * n * k if k else n - 1)


def test_fast_transform_rejects_sparse_knots_and_bad_buffers():
    grid = DesignGrid.uniform(10)
    with pytest.raises(UnsupportedError):
        fast_h_mult(FFBasisSpec(1, grid, [3, 5]), np.zeros(10))
    with pytest.raises(DomainError):
        fast_h_mult(FFBasisSpec(1, grid), np.zeros(10, dtype=np.float32))


def test_sparse_spec_keeps_polynomial_and_knot_columns():
    grid = DesignGrid.uniform(12)
    dense = ffb_matrix(FFBasisSpec(2, grid))
    spec = FFBasisSpec(2, grid, [4, 7])
    assert spec.dim == 5
    assert np.allclose(ffb_matrix(spec), dense[:, [0, 1, 2, 5, 8]])
    with pytest.raises(DomainError):
        FFBasisSpec(2, grid, [1, 4])
    with pytest.raises(DomainError):
        FFBasisSpec(2, grid, [11])


def test_basis_derivative_of_polynomial_column():
    grid = DesignGrid.uniform(6)
    spec = FFBasisSpec(2, grid)
    # h_2(x) = x (x - x_1) / 2, so h_2'' = 1
    assert ffb_deriv_eval(spec, 2, 2, 0.37) == pytest.approx(1.0)


def test_difference_operators_on_uniform_grid():
    n, v = 9, 0.125
    grid = DesignGrid.uniform(n)
    assert np.allclose(discrete_deriv_sparse(grid, 0).toarray(), np.eye(n))
    D1 = discrete_deriv_sparse(grid, 1).toarray()
    assert np.allclose(D1, (np.eye(n)[1:] - np.eye(n)[:-1]) / v)
    assert np.allclose(weighted_deriv_sparse(grid, 1).toarray(), np.eye(n)[1:] - np.eye(n)[:-1])


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_penalty_annihilates_degree_k_polynomials(k):
    grid = DesignGrid.random(25, np.random.default_rng(k))
    C = penalty_matrix_C(grid, k + 1)
    assert C.shape == (25 - k - 1, 25)
    poly = sum((j + 1.0) * grid.points ** j for j in range(k + 1))
    assert np.allclose(C @ poly, 0.0, atol=1e-8)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lateral_recursion(k):
    grid = DesignGrid.random(30, np.random.default_rng(k))
    assert lateral_recursion_check(grid, k) <= 1e-9
