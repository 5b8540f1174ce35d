"""
Curve fitting facade: knots, basis, penalty and λ selection in one call.
"""
import logging
from dataclasses import dataclass
from typing import Any, Literal, Optional, Tuple

import numpy as np
from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from apps.splines.exceptions import ConfigurationError, InvalidArgumentError
from apps.splines.services.basis import BasisSpec, eval_spline
from apps.splines.services.knots import KnotVector, place_knots
from apps.splines.services.penalty import build_penalty

from .selection import select_lambda
from .solver import FitConfig, FitResult, PenalizedSystem

logger = logging.getLogger(__name__)

# The four estimators compared by the simulation studies
ESTIMATORS = {
    'ospline': {'knot_strategy': 'quantile', 'flavor': 'derivative'},
    'standard': {'knot_strategy': 'uniform', 'flavor': 'difference-standard'},
    'naive': {'knot_strategy': 'quantile', 'flavor': 'difference-standard', 'force_naive': True},
    'general': {'knot_strategy': 'quantile', 'flavor': 'difference-general'},
}


class FitOptions(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    knot_strategy: Literal['uniform', 'quantile', 'file'] = 'quantile'
    k: int = Field(default=10, ge=0)
    d: int = Field(default=4, ge=1)
    m: int = Field(default=2, ge=1)
    flavor: Literal['difference-standard', 'difference-general', 'derivative'] = 'difference-general'
    lam: Optional[float] = Field(default=None, ge=0.0)
    force_naive: bool = False
    domain: Optional[Tuple[float, float]] = None
    knots: Optional[Any] = None
    grid_points: int = Field(default_factory=lambda: int(getattr(settings, 'PSPLINES_PLOT_GRID_POINTS', 512)), ge=2)

    @field_validator('knots')
    @classmethod
    def check_knots(cls, value):
        if value is not None and not isinstance(value, KnotVector):
            raise ValueError('knots must be a KnotVector')
        return value

    @classmethod
    def for_estimator(cls, name, **overrides):
        if name not in ESTIMATORS:
            raise InvalidArgumentError(f'unknown estimator {name!r}; expected one of {", ".join(ESTIMATORS)}')
        return build_options(**{**ESTIMATORS[name], **overrides})

    def describe(self):
        return self.model_dump(exclude={'knots'})


def build_options(**values):
    """FitOptions from keyword arguments, mapping validation failures to InvalidArgumentError"""
    try:
        return FitOptions(**values)
    except ValidationError as exc:
        raise InvalidArgumentError(f'invalid fit options: {exc}') from exc


@dataclass(frozen=True)
class CurveFit:
    result: FitResult
    knots: KnotVector
    options: FitOptions
    grid_x: np.ndarray
    grid_y: np.ndarray
    penalty: Any = None

    @property
    def basis(self):
        return BasisSpec(self.knots)

    def predict(self, x, m=0):
        return eval_spline(self.basis, self.result.beta, x, m)

    def as_dict(self):
        return {
            **self.result.as_dict(),
            'knots': self.knots.t.tolist(),
            'd': self.knots.d,
            'm': self.options.m,
            'flavor': self.options.flavor,
        }


def resolve_knots(x, options):
    if options.knot_strategy == 'file':
        if options.knots is None:
            raise InvalidArgumentError('knot strategy "file" needs a knot vector')
        if options.knots.d != options.d:
            raise InvalidArgumentError(f'knot file order {options.knots.d} does not match d = {options.d}')
        return options.knots
    return place_knots(options.knot_strategy, x, options.k, options.d, domain=options.domain)


def fit_curve(x, y, options=None):
    """
    Place knots, build the penalty, fit (fixed or GCV-selected λ) and evaluate
    the fitted curve on a grid over the domain.

    The standard difference penalty on non-uniform knots is the naive P-spline,
    whose λ → ∞ limit is not a polynomial; it is refused unless
    ``force_naive`` is set.
    """
    options = options or FitOptions()
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    kv = resolve_knots(x, options)
    if options.flavor == 'difference-standard' and not kv.is_uniform() and not options.force_naive:
        raise ConfigurationError(
            'the standard difference penalty on non-uniform knots is the naive P-spline, whose '
            'null space is not the polynomials of degree < m; use uniform knots, the general '
            'difference penalty, or set force_naive'
        )

    basis = BasisSpec(kv)
    penalty = build_penalty(kv, options.m, options.flavor)
    try:
        cfg = FitConfig(basis=basis, penalty=penalty, lam=options.lam)
    except ValidationError as exc:
        raise InvalidArgumentError(f'invalid fit configuration: {exc}') from exc

    logger.info(
        f'Fitting n={len(x)} with {options.flavor} penalty (m={options.m}), '
        f'{options.knot_strategy} knots (k={kv.k}, d={kv.d}), lambda={"auto" if cfg.lam is None else cfg.lam}'
    )
    system = PenalizedSystem(x, y, basis, penalty)
    result = select_lambda(x, y, cfg, system=system) if cfg.lam is None else system.fit(cfg.lam)

    grid_x = basis.grid(options.grid_points)
    grid_y = eval_spline(basis, result.beta, grid_x)
    return CurveFit(result=result, knots=kv, options=options, grid_x=grid_x, grid_y=grid_y, penalty=penalty)


def null_space_fit(x, y, basis, penalty):
    """
    λ = ∞ limit of a penalized fit: least squares on the columns B·H spanning
    the penalty's null space.
    """
    return PenalizedSystem(x, y, basis, penalty).null_space_fit()
