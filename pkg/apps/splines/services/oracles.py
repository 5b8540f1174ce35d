"""
Independent reference computations used by ``penalty --check``, ``verify`` and the tests.

Nothing here shares code with the banded construction: basis derivatives come
from ``scipy.interpolate.BSpline`` or from finite differences of it.
"""
import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import BSpline
from scipy.special import comb

from apps.splines.exceptions import InvalidArgumentError
from apps.splines.services.knots import KnotVector
from apps.splines.services.penalty import derivative_penalty

ORACLE_METHODS = ('scipy', 'finite-difference')


def _basis_functions(kv):
    return BSpline(kv.t, np.eye(kv.p), kv.d - 1, extrapolate=False)


def _quadrature(kv, nodes_per_interval):
    nodes, weights = leggauss(nodes_per_interval)
    edges = kv.domain_knots
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    x = (mid[:, None] + half[:, None] * nodes).ravel()
    w = (half[:, None] * weights).ravel()
    return x, w


def _central_derivative(spline, x, m, h):
    # m-th order central difference with binomial weights
    total = 0.0
    for s in range(m + 1):
        coefficient = (-1) ** s * comb(m, s, exact=True)
        total = total + coefficient * spline(x + (m / 2.0 - s) * h)
    return total / h ** m


def derivative_basis(kv, x, m, method='scipy'):
    """n x p matrix of m-th derivatives of every B-spline at x"""
    spline = _basis_functions(kv)
    if method == 'scipy':
        return spline.derivative(m)(x) if m else spline(x)
    if method == 'finite-difference':
        if m > 2:
            raise InvalidArgumentError('finite-difference derivatives are only supported for m <= 2')
        h = 1e-4 * float(np.min(np.diff(kv.domain_knots)))
        return _central_derivative(spline, x, m, h)
    raise InvalidArgumentError(f'unknown oracle method {method!r}; expected one of {", ".join(ORACLE_METHODS)}')


def penalty_oracle(kv, m, method='scipy'):
    """Dense ∫ B_u^(m) B_v^(m) dx over [a, b] computed without the sandwich formula"""
    x, w = _quadrature(kv, kv.d + 2)
    values = np.nan_to_num(derivative_basis(kv, x, m, method=method))
    return values.T @ (w[:, None] * values)


def relative_deviation(candidate, reference):
    candidate = np.asarray(candidate, dtype=float)
    reference = np.asarray(reference, dtype=float)
    return float(np.linalg.norm(candidate - reference) / max(np.linalg.norm(reference), np.finfo(float).tiny))


def random_knot_vector(rng, d=None, k=None, domain=None):
    """Random clamped knot vector with distinct interior knots, d in 2..6 and k in 0..8 by default"""
    d = int(rng.integers(2, 7)) if d is None else int(d)
    k = int(rng.integers(0, 9)) if k is None else int(k)
    if domain is None:
        a = float(rng.uniform(-2.0, 1.0))
        b = a + float(rng.uniform(0.5, 4.0))
    else:
        a, b = domain
    # stick-breaking keeps every interior gap at least 5% of the average spacing
    gaps = 0.05 + rng.uniform(size=k + 1)
    interior = a + (b - a) * np.cumsum(gaps)[:-1] / gaps.sum()
    return KnotVector(np.concatenate([np.full(d, a), interior, np.full(d, b)]), d)


def sandwich_deviation(kv, m, method='scipy'):
    """Relative Frobenius gap between 𝒟ᵀS̄𝒟 and the quadrature oracle"""
    return relative_deviation(derivative_penalty(kv, kv.d, m).to_dense(), penalty_oracle(kv, m, method=method))


def random_sandwich_deviations(count, rng):
    """(knots, m, deviation) for count random valid configurations"""
    results = []
    for _ in range(int(count)):
        kv = random_knot_vector(rng)
        m = int(rng.integers(1, kv.d))
        results.append((kv, m, sandwich_deviation(kv, m)))
    return results
