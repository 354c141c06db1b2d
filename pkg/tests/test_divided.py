import numpy as np
import pytest

from src.divided import (
    Centers,
    divided_difference,
    lagrange_matrix,
    newton_coefficients,
    newton_interpolate,
    newton_poly_eval,
)
from src.utils.errors import DomainError


def test_divided_difference_of_cubic_is_leading_coefficient():
    z = np.array([0.0, 0.3, 1.1, 2.0])
    f = 2.0 * z ** 3 - z + 5.0
    assert divided_difference(f, z) == pytest.approx(2.0)
    assert divided_difference(f, z, method="recursive") == pytest.approx(2.0)


def test_second_difference_of_cube_is_sum_of_centers():
    z = np.array([0.0, 1.0, 2.0])
    assert divided_difference(z ** 3, z) == pytest.approx(3.0)


def test_single_center_returns_value():
    assert divided_difference([4.2], [1.0]) == pytest.approx(4.2)


def test_weights_and_recursion_agree_on_random_data():
    rng = np.random.default_rng(0)
    z = np.sort(rng.uniform(0, 1, 6))
    f = rng.standard_normal(6)
    assert divided_difference(f, z) == pytest.approx(divided_difference(f, z, "recursive"), rel=1e-9)


def test_centers_must_be_distinct():
    with pytest.raises(DomainError):
        Centers([0.0, 1.0, 0.0])
    with pytest.raises(DomainError):
        divided_difference([1.0, 2.0], [0.0, 1.0, 2.0])


def test_newton_polynomial_and_interpolation():
    assert newton_poly_eval(2.0, [0.0, 1.0]) == pytest.approx(2.0)
    assert newton_poly_eval(3.0) == 1.0
    t = np.array([0.0, 0.5, 1.5, 2.0])
    p = lambda x: x ** 3 - 2.0 * x + 1.0
    assert newton_coefficients(p(t), t)[-1] == pytest.approx(1.0)
    xs = np.linspace(-1.0, 3.0, 9)
    assert np.allclose(newton_interpolate(p(t), t, xs), p(xs))


def test_lagrange_matrix_reproduces_low_degree_polynomials():
    nodes = np.array([0.1, 0.4, 0.9])
    targets = np.array([0.0, 0.4, 1.3])
    P = lagrange_matrix(nodes, targets)
    q = lambda x: 3.0 * x ** 2 - x + 0.5
    assert np.allclose(P @ q(nodes), q(targets))
    assert np.allclose(P[1], [0.0, 1.0, 0.0])
