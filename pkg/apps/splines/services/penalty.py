"""
Difference matrices, lower-order Gram matrices and penalty matrices.

Three penalty flavors are built here:

``difference-standard``
    S = DᵀD with the unweighted binomial difference matrix D.
``difference-general``
    S = 𝒟ᵀ𝒟 with the knot-spacing weighted difference matrix 𝒟.
``derivative``
    S = 𝒟ᵀ S̄ 𝒟, the integrated squared m-th derivative, with sparse root
    K = U𝒟 where UᵀU = S̄.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import sparse
from scipy.special import comb

from apps.splines.exceptions import InvalidArgumentError, NumericalError, SingularWeightError
from apps.splines.services.banded import CholeskyFactor, RowBand, SymmetricBand
from apps.splines.services.basis import BasisSpec, design_matrix
from apps.splines.services.knots import lag_weights

logger = logging.getLogger(__name__)

FLAVORS = ('difference-standard', 'difference-general', 'derivative')


@dataclass(frozen=True)
class DiffMatrix:
    m: int
    kind: str
    band: RowBand

    @property
    def shape(self):
        return self.band.shape

    def to_dense(self):
        return self.band.to_dense()

    def to_sparse(self):
        return self.band.to_sparse()

    def __matmul__(self, beta):
        return self.band.matvec(beta)


@dataclass(frozen=True)
class GramMatrix:
    """Gram matrix of the order d - m B-splines over [a, b] and its Cholesky factor"""
    band: SymmetricBand
    factor: CholeskyFactor
    m: int

    @property
    def U(self):
        return self.factor.band

    def to_dense(self):
        return self.band.to_dense()


@dataclass(frozen=True)
class PenaltyMatrix:
    S: SymmetricBand
    root: RowBand
    flavor: str
    diff: DiffMatrix
    gram: Optional[GramMatrix] = None

    @property
    def m(self):
        return self.diff.m

    @property
    def p(self):
        return self.S.n

    @property
    def bandwidth(self):
        return self.S.upper

    def to_dense(self):
        return self.S.to_dense()

    def quadratic_form(self, beta):
        r = self.root.matvec(beta)
        return float(r @ r)


def _check_order(kv, d, m):
    if d != kv.d:
        raise InvalidArgumentError(f'order d = {d} does not match the knot vector order {kv.d}')
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f'penalty order must be a positive integer, got {m}')
    if m >= d:
        raise InvalidArgumentError(
            f'penalty order m = {m} must satisfy m <= d - 1 = {d - 1}; no order-d difference matrix exists'
        )
    return int(m)


def standard_diff(p, m):
    """Binomial difference matrix D_p^(m) of shape (p - m) x p"""
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f'difference order must be a positive integer, got {m}')
    if m >= p:
        raise InvalidArgumentError(f'difference order m = {m} must be below p = {p}')
    m = int(m)
    s = np.arange(m + 1)
    row = (-1.0) ** (m - s) * comb(m, s, exact=False)
    return DiffMatrix(m=m, kind='standard', band=RowBand(np.tile(row, (p - m, 1)), p))


def general_diff(kv, d, m):
    """
    Knot-spacing weighted difference matrix 𝒟_p^(m).

    Built as the product of m order-1 steps; step i divides the lag-1
    differences by the weights returned by ``lag_weights(kv, i)``.
    """
    m = _check_order(kv, d, m)
    p = kv.p
    result = None
    for i in range(1, m + 1):
        weights = lag_weights(kv, i)
        if np.any(weights <= 0):
            j = int(np.argmin(weights)) + i
            raise SingularWeightError(f'zero knot lag in difference step {i} at coefficient {j}')
        step = RowBand(np.column_stack([-1.0 / weights, 1.0 / weights]), p - i + 1)
        result = step if result is None else step @ result
    return DiffMatrix(m=m, kind='general', band=result)


def gram(kv, d, m):
    """
    S̄ with entries ∫ B_u B_v dx over the order d - m basis on knots t[m:K-m].

    Each domain interval is integrated with d - m Gauss-Legendre nodes, which is
    exact for the piecewise polynomial integrand.
    """
    m = _check_order(kv, d, m)
    q = d - m
    lower = BasisSpec(kv.lowered(m))
    nodes, weights = leggauss(q)
    edges = kv.domain_knots
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    x = (mid[:, None] + half[:, None] * nodes).ravel()
    w = (half[:, None] * weights).ravel()

    B = design_matrix(lower, x).to_sparse()
    G = B.T @ sparse.diags(w) @ B
    band = SymmetricBand.from_sparse(G, q - 1)
    try:
        factor = band.cholesky()
    except NumericalError as exc:
        raise NumericalError(f'Gram matrix of order {q} is not positive definite for {kv!r}') from exc
    return GramMatrix(band=band, factor=factor, m=m)


def difference_penalty(diff):
    """S = DᵀD with root D"""
    return PenaltyMatrix(
        S=diff.band.gram(),
        root=diff.band,
        flavor='difference-general' if diff.kind == 'general' else 'difference-standard',
        diff=diff,
    )


def derivative_penalty(kv, d, m):
    """Integrated squared m-th derivative penalty S = 𝒟ᵀ S̄ 𝒟 with sparse root K = U𝒟"""
    diff = general_diff(kv, d, m)
    lower_gram = gram(kv, d, m)
    D = diff.to_sparse()
    S = D.T @ lower_gram.band.to_sparse() @ D
    root = lower_gram.U @ diff.band
    return PenaltyMatrix(
        S=SymmetricBand.from_sparse(S, d - 1),
        root=root,
        flavor='derivative',
        diff=diff,
        gram=lower_gram,
    )


def build_penalty(kv, m, flavor):
    """Penalty of the named flavor for the basis on kv"""
    if flavor == 'difference-standard':
        return difference_penalty(standard_diff(kv.p, m))
    if flavor == 'difference-general':
        return difference_penalty(general_diff(kv, kv.d, m))
    if flavor == 'derivative':
        return derivative_penalty(kv, kv.d, m)
    raise InvalidArgumentError(f'unknown penalty flavor {flavor!r}; expected one of {", ".join(FLAVORS)}')


def null_space_basis(penalty, bs):
    """
    p x m matrix whose columns span the null space of the penalty root.

    For the standard flavor the columns are powers of the coefficient index.
    Otherwise they are the B-spline coefficients of 1, x, ..., x^(m-1), found by
    least squares on d Gauss-Legendre nodes per domain interval.
    """
    m, p = penalty.m, bs.p
    if penalty.p != p:
        raise InvalidArgumentError(f'penalty dimension {penalty.p} does not match the basis dimension {p}')

    if penalty.diff.kind == 'standard':
        j = np.arange(p, dtype=float) / max(p - 1, 1)
        H = np.column_stack([j ** r for r in range(m)])
    else:
        nodes, _ = leggauss(bs.d)
        edges = bs.kv.domain_knots
        x = ((edges[:-1] + edges[1:])[:, None] / 2.0 + (np.diff(edges) / 2.0)[:, None] * nodes).ravel()
        B = design_matrix(bs, x).to_dense()
        targets = np.column_stack([x ** r for r in range(m)])
        H, *_ = np.linalg.lstsq(B, targets, rcond=None)

    residual = np.max(np.abs(penalty.root.matvec(H))) if H.size else 0.0
    scale = max(1.0, float(np.max(np.abs(penalty.root.values))) * float(np.max(np.abs(H))))
    logger.debug(f'Null space residual {residual:.3e} for {penalty.flavor} penalty of order {m}')
    if residual > 1e-8 * scale:
        raise NumericalError(f'null space columns are not annihilated by the penalty root (residual {residual:.3e})')
    return H
