"""Divided differences and Newton interpolation."""

from .newton import (
    Centers,
    as_centers,
    dd_weights,
    divided_difference,
    divided_difference_table,
    lagrange_matrix,
    newton_coefficients,
    newton_interpolate,
    newton_poly_eval,
)

__all__ = [
    'Centers',
    'as_centers',
    'dd_weights',
    'divided_difference',
    'divided_difference_table',
    'lagrange_matrix',
    'newton_coefficients',
    'newton_interpolate',
    'newton_poly_eval',
]
