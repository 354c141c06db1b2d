"""Discrete B-splines, discrete natural splines and least squares projections."""

from .basis import DBSplineBasis, NaturalBasis, dbs_eval
from .dense import dbs_values_dense, dense_evaluations, extended_points
from .sparse import dbs_values_sparse
from .natural import half_degree, natural_basis, natural_boundary_residual
from .projection import ROUTES, deriv_constraint_matrix, ffb_pinv_apply, project_ls
from .bench import cond_benchmark, route_condition_numbers

__all__ = [
    'DBSplineBasis',
    'NaturalBasis',
    'dbs_eval',
    'dbs_values_dense',
    'dense_evaluations',
    'extended_points',
    'dbs_values_sparse',
    'half_degree',
    'natural_basis',
    'natural_boundary_residual',
    'ROUTES',
    'deriv_constraint_matrix',
    'ffb_pinv_apply',
    'project_ls',
    'cond_benchmark',
    'route_condition_numbers',
]
