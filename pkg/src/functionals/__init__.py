"""Total variation and Sobolev functionals of discrete splines."""

from .tv import tv_from_coefficients, tv_functional, tv_jump_sum
from .spline_k import k_matrix_inv, spectral_similarity_check, w2_diag
from .sobolev import SobolevMatrices, sobolev_M, sobolev_V, sobolev_functional, sobolev_quadrature
from .approx import basis_distance_bound, basis_distance_check, truncated_power

__all__ = [
    'tv_from_coefficients',
    'tv_functional',
    'tv_jump_sum',
    'k_matrix_inv',
    'spectral_similarity_check',
    'w2_diag',
    'SobolevMatrices',
    'sobolev_M',
    'sobolev_V',
    'sobolev_functional',
    'sobolev_quadrature',
    'basis_distance_bound',
    'basis_distance_check',
    'truncated_power',
]
