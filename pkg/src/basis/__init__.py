"""Falling factorial basis, discrete derivative matrices and fast transforms."""

from .falling_factorial import (
    FFBasisSpec,
    ff_column,
    ff_column_deriv,
    ffb_deriv_eval,
    ffb_deriv_matrix,
    ffb_eval,
    ffb_matrix,
)
from .operators import (
    PenaltyOperators,
    build_penalty_ops,
    discrete_deriv_matrix,
    discrete_deriv_sparse,
    extended_weight_diag,
    ffb_inverse_matrix,
    ffb_inverse_sparse,
    penalty_matrix_C,
    verify_inverse_identity,
    weight_diag,
    weighted_deriv_sparse,
)
from .transforms import FlopCounter, fast_h_mult, flop_bound, lateral_recursion_check

__all__ = [
    'FFBasisSpec',
    'ff_column',
    'ff_column_deriv',
    'ffb_deriv_eval',
    'ffb_deriv_matrix',
    'ffb_eval',
    'ffb_matrix',
    'PenaltyOperators',
    'build_penalty_ops',
    'discrete_deriv_matrix',
    'discrete_deriv_sparse',
    'extended_weight_diag',
    'ffb_inverse_matrix',
    'ffb_inverse_sparse',
    'penalty_matrix_C',
    'verify_inverse_identity',
    'weight_diag',
    'weighted_deriv_sparse',
    'FlopCounter',
    'fast_h_mult',
    'flop_bound',
    'lateral_recursion_check',
]
