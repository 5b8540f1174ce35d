"""
B-spline evaluation on arbitrary knot sequences.

Values come from the triangular Cox-de Boor scheme over the ``d`` active
functions of each abscissa; derivatives of a fitted spline are obtained by
differencing its coefficients down to a lower-order basis.
"""
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from apps.splines.exceptions import InvalidArgumentError, OutOfDomainError, SingularWeightError
from apps.splines.services.banded import SymmetricBand
from apps.splines.services.knots import KnotVector, lag_weights


@dataclass(frozen=True)
class BasisSpec:
    kv: KnotVector

    @property
    def d(self):
        return self.kv.d

    @property
    def p(self):
        return self.kv.p

    @property
    def domain(self):
        return self.kv.domain

    def lowered(self, m):
        return BasisSpec(self.kv.lowered(m))

    def grid(self, size):
        return np.linspace(self.kv.a, self.kv.b, int(size))


@dataclass(frozen=True)
class DesignMatrix:
    """
    n x p design matrix stored row-compactly.

    Row i is nonzero only on columns ``offsets[i] .. offsets[i] + d - 1`` with
    values ``values[i]``.
    """
    values: np.ndarray
    offsets: np.ndarray
    p: int

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def d(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return (self.n, self.p)

    def to_sparse(self):
        rows = np.repeat(np.arange(self.n), self.d)
        cols = (self.offsets[:, None] + np.arange(self.d)).ravel()
        return sparse.csr_matrix((self.values.ravel(), (rows, cols)), shape=self.shape)

    def to_dense(self):
        return self.to_sparse().toarray()

    def crossprod(self):
        """BᵀB as a symmetric band with d - 1 super-diagonals"""
        B = self.to_sparse()
        return SymmetricBand.from_sparse(B.T @ B, self.d - 1)

    def matvec(self, beta):
        beta = np.asarray(beta, dtype=float)
        if beta.shape[0] != self.p:
            raise InvalidArgumentError(f'expected {self.p} coefficients, got {beta.shape[0]}')
        window = beta[self.offsets[:, None] + np.arange(self.d)]
        return np.einsum('ij,ij->i', self.values, window)

    def rmatvec(self, y):
        """Bᵀy"""
        return self.to_sparse().T @ np.asarray(y, dtype=float)

    def rows(self):
        """Compact (offset, values) pairs for JSON export"""
        return [{'offset': int(offset), 'values': row.tolist()} for offset, row in zip(self.offsets, self.values)]


def _intervals(kv, x):
    a, b = kv.domain
    outside = (x < a) | (x > b) | ~np.isfinite(x)
    if np.any(outside):
        bad = x[outside][0]
        raise OutOfDomainError(f'x = {bad!r} lies outside the domain [{a}, {b}]')
    # the last interval is closed on the right so x = b evaluates
    left = np.searchsorted(kv.t, x, side='right') - 1
    return np.clip(left, kv.d - 1, kv.p - 1)


def _active_values(kv, x, left):
    t, d = kv.t, kv.d
    work = np.zeros((len(x), d))
    work[:, 0] = 1.0
    for j in range(1, d):
        saved = np.zeros(len(x))
        for r in range(j):
            right = t[left + r + 1]
            lower = t[left + r + 1 - j]
            span = right - lower
            with np.errstate(divide='ignore', invalid='ignore'):
                term = np.where(span > 0, work[:, r] / span, 0.0)
            work[:, r] = saved + (right - x) * term
            saved = (x - lower) * term
        work[:, j] = saved
    return work


def eval_row(bs, x):
    """Offset of the first active B-spline at x and the d active values"""
    x = np.array([float(x)])
    left = _intervals(bs.kv, x)
    values = _active_values(bs.kv, x, left)
    return int(left[0] - bs.d + 1), values[0]


def design_matrix(bs, x):
    x = np.asarray(x, dtype=float).ravel()
    left = _intervals(bs.kv, x)
    values = _active_values(bs.kv, x, left)
    return DesignMatrix(values=values, offsets=left - bs.d + 1, p=bs.p)


def derivative_coeffs(bs, beta, m):
    """
    Lower-order basis and coefficients representing the m-th derivative.

    The basis runs over the knots with the first and last m removed and has
    order d - m; the returned ``p - m`` coefficients reproduce f^(m) on it.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape[0] != bs.p:
        raise InvalidArgumentError(f'expected {bs.p} coefficients, got {beta.shape[0]}')
    if int(m) != m or m < 0:
        raise InvalidArgumentError(f'derivative order must be a nonnegative integer, got {m}')
    if m >= bs.d:
        raise InvalidArgumentError(f'derivative order m = {m} must be below the spline order d = {bs.d}')

    coeffs = beta
    for i in range(1, int(m) + 1):
        weights = lag_weights(bs.kv, i)
        if np.any(weights <= 0):
            raise SingularWeightError(f'zero knot lag in difference step {i}')
        coeffs = np.diff(coeffs, axis=0) / weights.reshape((-1,) + (1,) * (coeffs.ndim - 1))
    return bs.lowered(int(m)), coeffs


def eval_spline(bs, beta, x, m=0):
    """f^(m)(x) for the spline with coefficients beta; scalar in, scalar out"""
    scalar = np.ndim(x) == 0
    lower, coeffs = derivative_coeffs(bs, beta, m)
    values = design_matrix(lower, np.atleast_1d(x)).matvec(coeffs)
    return float(values[0]) if scalar else values
