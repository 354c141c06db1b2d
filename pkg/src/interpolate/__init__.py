"""Dual basis and explicit/implicit discrete spline interpolation."""

from .dual import DiscreteSplineFit, dual_coefficients, interp_explicit, interp_implicit

__all__ = [
    'DiscreteSplineFit',
    'dual_coefficients',
    'interp_explicit',
    'interp_implicit',
]
