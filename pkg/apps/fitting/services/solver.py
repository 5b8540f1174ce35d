"""
Penalized least squares on a B-spline basis.

For a fixed smoothing parameter the coefficients solve
``(BᵀB + λS) β = Bᵀy``; the system is assembled and factorized in band form.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, model_validator

from apps.splines.exceptions import InvalidArgumentError, NumericalError, RankDeficiencyError
from apps.splines.services.basis import BasisSpec, design_matrix
from apps.splines.services.penalty import PenaltyMatrix, null_space_basis

logger = logging.getLogger(__name__)


def _setting(name, default):
    return getattr(settings, name, default)


class FitConfig(BaseModel):
    """
    Basis, penalty and smoothing parameter of one penalized fit.

    ``lam=None`` requests GCV selection over ``10**(log10_min .. log10_max)``
    shifted by the scale of BᵀB relative to S.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    basis: Any
    penalty: Any
    lam: Optional[float] = Field(default=None, ge=0.0)
    log10_min: float = Field(default_factory=lambda: float(_setting('PSPLINES_LAMBDA_LOG10_MIN', -8.0)))
    log10_max: float = Field(default_factory=lambda: float(_setting('PSPLINES_LAMBDA_LOG10_MAX', 8.0)))
    grid_points: int = Field(default_factory=lambda: int(_setting('PSPLINES_LAMBDA_GRID_POINTS', 41)), ge=3)
    tolerance: float = Field(default_factory=lambda: float(_setting('PSPLINES_LAMBDA_TOLERANCE', 1e-3)), gt=0.0)
    flat_tolerance: float = Field(
        default_factory=lambda: float(_setting('PSPLINES_FLAT_GCV_TOLERANCE', 1e-12)), ge=0.0
    )

    @model_validator(mode='after')
    def check_dimensions(self):
        if not isinstance(self.basis, BasisSpec):
            raise ValueError(f'basis must be a BasisSpec, got {type(self.basis).__name__}')
        if not isinstance(self.penalty, PenaltyMatrix):
            raise ValueError(f'penalty must be a PenaltyMatrix, got {type(self.penalty).__name__}')
        if self.penalty.p != self.basis.p:
            raise ValueError(f'penalty dimension {self.penalty.p} does not match basis dimension {self.basis.p}')
        if self.log10_min >= self.log10_max:
            raise ValueError('log10_min must be below log10_max')
        return self

    def with_lambda(self, lam):
        return self.model_copy(update={'lam': float(lam)})


@dataclass(frozen=True)
class FitResult:
    beta: np.ndarray
    lam: float
    edf: float
    gcv: float
    fitted: np.ndarray
    rss: float
    n: int
    flat_gcv: bool = False
    gcv_path: Optional[dict] = field(default=None, repr=False)

    def as_dict(self):
        return {
            'lambda': _finite_or_none(self.lam),
            'edf': self.edf,
            'gcv': _finite_or_none(self.gcv),
            'rss': self.rss,
            'n': self.n,
            'flat_gcv': self.flat_gcv,
            'beta': self.beta.tolist(),
        }


def _finite_or_none(value):
    return float(value) if np.isfinite(value) else None


# fits closer than this share of n to interpolation score inf
SATURATION = 1e-6


def gcv_score(n, rss, edf):
    return n * rss / (n - edf) ** 2 if n - edf > SATURATION * n else float('inf')


class PenalizedSystem:
    """
    Data-dependent pieces of the normal equations, computed once per (x, y).

    Evaluating a new λ only adds λS to the stored BᵀB band and refactorizes.
    """

    def __init__(self, x, y, basis, penalty):
        x = np.asarray(x, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        if x.shape != y.shape:
            raise InvalidArgumentError(f'x and y lengths differ: {len(x)} vs {len(y)}')
        if len(x) == 0:
            raise InvalidArgumentError('no observations')
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidArgumentError('observations must be finite')
        if penalty.p != basis.p:
            raise InvalidArgumentError(f'penalty dimension {penalty.p} does not match basis dimension {basis.p}')
        distinct = len(np.unique(x))
        if distinct < penalty.m + 1:
            raise InvalidArgumentError(
                f'need at least m + 1 = {penalty.m + 1} distinct x values, got {distinct}'
            )

        self.x, self.y = x, y
        self.basis, self.penalty = basis, penalty
        self.B = design_matrix(basis, x)
        self.BtB = self.B.crossprod()
        self.Bty = self.B.rmatvec(y)
        self.upper = max(basis.d - 1, penalty.bandwidth)
        self._BtB_dense = self.BtB.to_dense()

    @property
    def n(self):
        return len(self.y)

    def scale(self):
        """tr(BᵀB) / tr(S), used to centre the λ grid"""
        trace_s = float(np.sum(self.penalty.S.diagonal()))
        trace_b = float(np.sum(self.BtB.diagonal()))
        if trace_s <= 0 or trace_b <= 0:
            return 1.0
        return trace_b / trace_s

    def factorize(self, lam):
        system = self.BtB.widened(self.upper) + self.penalty.S.scaled(lam).widened(self.upper)
        try:
            return system.cholesky()
        except NumericalError as exc:
            unsupported = np.flatnonzero(self.BtB.diagonal() == 0)
            window = (int(unsupported[0]), int(unsupported[-1])) if len(unsupported) else None
            detail = f'; columns {window[0]}..{window[1]} have no data support' if window else ''
            raise RankDeficiencyError(
                f'penalized normal equations are singular at lambda = {lam:g}{detail}', columns=window
            ) from exc

    def edf(self, lam, factor=None):
        factor = factor or self.factorize(lam)
        return float(np.trace(factor.solve(self._BtB_dense)))

    def fit(self, lam):
        factor = self.factorize(lam)
        beta = factor.solve(self.Bty)
        fitted = self.B.matvec(beta)
        rss = float(np.sum((self.y - fitted) ** 2))
        edf = self.edf(lam, factor)
        return FitResult(
            beta=beta,
            lam=float(lam),
            edf=edf,
            gcv=gcv_score(self.n, rss, edf),
            fitted=fitted,
            rss=rss,
            n=self.n,
        )

    def null_space_fit(self):
        """λ = ∞ limit: least squares on the columns B·H spanning the penalty's null space"""
        H = null_space_basis(self.penalty, self.basis)
        X = self.B.to_sparse() @ H
        coefficients, *_ = np.linalg.lstsq(X, self.y, rcond=None)
        beta = H @ coefficients
        fitted = self.B.matvec(beta)
        rss = float(np.sum((self.y - fitted) ** 2))
        edf = float(np.linalg.matrix_rank(X))
        return FitResult(
            beta=beta,
            lam=float('inf'),
            edf=edf,
            gcv=gcv_score(self.n, rss, edf),
            fitted=fitted,
            rss=rss,
            n=self.n,
        )

    def objective(self, beta, lam):
        residual = self.y - self.B.matvec(beta)
        return float(residual @ residual) + lam * self.penalty.quadratic_form(beta)


def _fixed_lambda(cfg, lam):
    if lam is None:
        lam = cfg.lam
    if lam is None:
        raise InvalidArgumentError('a fixed lambda is required; use select_lambda for GCV selection')
    if lam < 0 or not np.isfinite(lam):
        raise InvalidArgumentError(f'lambda must be finite and nonnegative, got {lam}')
    return float(lam)


def solve(x, y, cfg, lam=None):
    """Penalized fit at the fixed λ of cfg (or the λ given)"""
    lam = _fixed_lambda(cfg, lam)
    system = PenalizedSystem(x, y, cfg.basis, cfg.penalty)
    if lam == 0 and system.n < cfg.basis.p:
        raise RankDeficiencyError(
            f'an unpenalized fit needs n >= p, got n = {system.n} and p = {cfg.basis.p}'
        )
    result = system.fit(lam)
    logger.debug(f'Solved at lambda={lam:g}: edf={result.edf:.4f}, rss={result.rss:.6g}')
    return result


def edf(x, cfg, lam=None):
    """trace((BᵀB + λS)⁻¹ BᵀB); y plays no role"""
    lam = _fixed_lambda(cfg, lam)
    x = np.asarray(x, dtype=float).ravel()
    system = PenalizedSystem(x, np.zeros_like(x), cfg.basis, cfg.penalty)
    return system.edf(lam)
