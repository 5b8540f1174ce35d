from .banded import RowBand, SymmetricBand
from .basis import BasisSpec, DesignMatrix, derivative_coeffs, design_matrix, eval_row, eval_spline
from .knots import (
    KnotDiagnostics,
    KnotVector,
    lag_weights,
    place_knots,
    place_quantile_clamped,
    place_uniform,
    validate,
)
from .penalty import (
    FLAVORS,
    DiffMatrix,
    GramMatrix,
    PenaltyMatrix,
    build_penalty,
    derivative_penalty,
    difference_penalty,
    general_diff,
    gram,
    null_space_basis,
    standard_diff,
)

__all__ = [
    'RowBand',
    'SymmetricBand',
    'BasisSpec',
    'DesignMatrix',
    'derivative_coeffs',
    'design_matrix',
    'eval_row',
    'eval_spline',
    'KnotDiagnostics',
    'KnotVector',
    'lag_weights',
    'place_knots',
    'place_quantile_clamped',
    'place_uniform',
    'validate',
    'FLAVORS',
    'DiffMatrix',
    'GramMatrix',
    'PenaltyMatrix',
    'build_penalty',
    'derivative_penalty',
    'difference_penalty',
    'general_diff',
    'gram',
    'null_space_basis',
    'standard_diff',
]
