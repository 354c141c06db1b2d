"""Discrete splines: operators, bases, functionals and estimators."""

__all__ = [
    'grid',
    'divided',
    'calculus',
    'basis',
    'interpolate',
    'dbsplines',
    'functionals',
    'solvers',
    'data',
    'utils',
]
