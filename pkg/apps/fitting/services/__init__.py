from .curve import ESTIMATORS, CurveFit, FitOptions, build_options, fit_curve, null_space_fit
from .selection import lambda_grid, select_lambda
from .solver import FitConfig, FitResult, PenalizedSystem, edf, gcv_score, solve

__all__ = [
    'ESTIMATORS',
    'CurveFit',
    'FitOptions',
    'build_options',
    'fit_curve',
    'null_space_fit',
    'lambda_grid',
    'select_lambda',
    'FitConfig',
    'FitResult',
    'PenalizedSystem',
    'edf',
    'gcv_score',
    'solve',
]
