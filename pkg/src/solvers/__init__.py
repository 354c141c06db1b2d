"""Estimators: TV denoising, trend filtering, BW filtering and smoothing splines."""

from .config import MODES, FitResult, SolverConfig
from .tvd import tv_denoise_1d, tv_objective
from .trend_filter import (
    admm_certificate,
    admm_core,
    dual_certificate,
    fused_differences,
    kkt_residual,
    penalty_support,
    polish_fit,
    refine_polish,
    tf_objective,
    trend_filter,
)
from .natural import natural_constraint_residual, natural_elimination, natural_trend_filter
from .bw import bw_filter, bw_penalty_weights, smoother_df
from .smoothing import smoothing_spline, ss_bw_distance_check

__all__ = [
    'MODES',
    'FitResult',
    'SolverConfig',
    'tv_denoise_1d',
    'tv_objective',
    'admm_certificate',
    'admm_core',
    'dual_certificate',
    'fused_differences',
    'kkt_residual',
    'penalty_support',
    'polish_fit',
    'refine_polish',
    'tf_objective',
    'trend_filter',
    'natural_constraint_residual',
    'natural_elimination',
    'natural_trend_filter',
    'bw_filter',
    'bw_penalty_weights',
    'smoother_df',
    'smoothing_spline',
    'ss_bw_distance_check',
]
