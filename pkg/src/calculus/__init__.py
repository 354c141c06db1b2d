"""Discrete derivative and discrete integral operators."""

from .discrete import (
    GridFunction,
    apply_discrete_deriv,
    apply_discrete_integ,
    discrete_deriv,
    discrete_deriv_recursive,
    discrete_integ,
    discrete_integ_recursive,
)

__all__ = [
    'GridFunction',
    'apply_discrete_deriv',
    'apply_discrete_integ',
    'discrete_deriv',
    'discrete_deriv_recursive',
    'discrete_integ',
    'discrete_integ_recursive',
]
