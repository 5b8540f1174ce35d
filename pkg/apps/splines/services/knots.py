"""
Knot sequences for B-spline bases.

A ``KnotVector`` of order ``d`` holds ``K = k + 2d`` nondecreasing knots. The
domain is ``[a, b] = [t[d-1], t[K-d]]`` (0-based), ``k`` knots lie strictly
inside it and ``p = K - d`` B-splines are implied.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from apps.splines.exceptions import (
    InvalidArgumentError,
    KnotPlacementError,
    KnotValidationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KnotDiagnostics:
    """Structured result of ``validate``"""
    K: int
    k: int
    p: int
    d: int
    domain: tuple
    multiplicities: dict
    violations: list = field(default_factory=list)

    @property
    def is_valid(self):
        return not self.violations

    def as_dict(self):
        return {
            'K': self.K,
            'k': self.k,
            'p': self.p,
            'd': self.d,
            'domain': list(self.domain),
            'multiplicities': [[value, count] for value, count in self.multiplicities.items()],
            'violations': list(self.violations),
            'is_valid': self.is_valid,
        }


def validate(knots, d=None):
    """
    Check a knot sequence and report its bookkeeping.

    Accepts a ``KnotVector`` or a raw sequence together with ``d``. Never raises
    for a bad sequence; problems are listed in ``violations``.
    """
    if isinstance(knots, KnotVector):
        t, d = knots.t, knots.d
    else:
        t = np.asarray(knots, dtype=float).ravel()
    if d is None:
        raise InvalidArgumentError('the spline order d is required to validate a raw knot sequence')
    d = int(d)

    violations = []
    K = len(t)
    if d < 1:
        violations.append(f'order must be positive, got {d}')
    if not np.all(np.isfinite(t)):
        violations.append('knots must be finite')
    if K > 1 and np.any(np.diff(t) < 0):
        violations.append('not nondecreasing')

    multiplicities = dict(Counter(float(value) for value in t))
    if d >= 1 and any(count > d for count in multiplicities.values()):
        violations.append('multiplicity exceeds order')

    if d < 1 or K < 2 * d:
        violations.append(f'need at least 2d = {2 * max(d, 1)} knots, got {K}')
        return KnotDiagnostics(K, K - 2 * d, K - d, d, (float('nan'), float('nan')), multiplicities, violations)

    a, b = float(t[d - 1]), float(t[K - d])
    if not a < b:
        violations.append(f'domain must satisfy a < b, got [{a}, {b}]')
    interior = t[d:K - d]
    if len(interior) and np.any((interior <= a) | (interior >= b)):
        violations.append('interior knots must lie strictly inside the domain')
    if len(interior) > 1 and np.any(np.diff(interior) == 0):
        violations.append('interior knot multiplicity > 1 is not supported')

    return KnotDiagnostics(K, K - 2 * d, K - d, d, (a, b), multiplicities, violations)


@dataclass(frozen=True, eq=False)
class KnotVector:
    t: np.ndarray
    d: int

    def __post_init__(self):
        t = np.array(self.t, dtype=float).ravel()
        t.flags.writeable = False
        object.__setattr__(self, 't', t)
        object.__setattr__(self, 'd', int(self.d))
        report = validate(t, self.d)
        if not report.is_valid:
            raise KnotValidationError(report.violations)

    @property
    def K(self):
        return len(self.t)

    @property
    def k(self):
        return self.K - 2 * self.d

    @property
    def p(self):
        return self.K - self.d

    @property
    def a(self):
        return float(self.t[self.d - 1])

    @property
    def b(self):
        return float(self.t[self.K - self.d])

    @property
    def domain(self):
        return (self.a, self.b)

    @property
    def interior(self):
        return self.t[self.d:self.K - self.d]

    @property
    def domain_knots(self):
        """Boundaries plus interior knots, k + 2 values"""
        return self.t[self.d - 1:self.K - self.d + 1]

    def is_uniform(self, rtol=1e-9):
        steps = np.diff(self.t)
        return bool(np.ptp(steps) <= rtol * np.max(np.abs(steps)))

    def is_clamped(self):
        d = self.d
        return bool(np.all(self.t[:d] == self.a) and np.all(self.t[-d:] == self.b))

    def lowered(self, m):
        """Knots (t_j) with the first and last m removed, order d - m"""
        if not 0 <= m < self.d:
            raise InvalidArgumentError(f'cannot lower order {self.d} by {m}')
        if m == 0:
            return self
        return KnotVector(self.t[m:self.K - m], self.d - m)

    def diagnostics(self):
        return validate(self)

    def __eq__(self, other):
        if not isinstance(other, KnotVector):
            return NotImplemented
        return self.d == other.d and np.array_equal(self.t, other.t)

    def __hash__(self):
        return hash((self.d, self.t.tobytes()))

    def __repr__(self):
        return f'KnotVector(d={self.d}, k={self.k}, domain=[{self.a:g}, {self.b:g}])'


def _check_domain(domain):
    try:
        a, b = (float(value) for value in domain)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f'domain must be a pair of numbers, got {domain!r}') from exc
    if not (np.isfinite(a) and np.isfinite(b)):
        raise InvalidArgumentError('domain bounds must be finite')
    if a >= b:
        raise InvalidArgumentError(f'domain must satisfy a < b, got [{a}, {b}]')
    return a, b


def _check_counts(k, d):
    if int(k) != k or k < 0:
        raise InvalidArgumentError(f'interior knot count must be a nonnegative integer, got {k}')
    if int(d) != d or d < 1:
        raise InvalidArgumentError(f'order must be a positive integer, got {d}')
    return int(k), int(d)


def place_uniform(domain, k, d):
    """k + 2 equidistant domain knots, extended outward by d - 1 knots with the same step"""
    a, b = _check_domain(domain)
    k, d = _check_counts(k, d)
    h = (b - a) / (k + 1)
    t = a + h * np.arange(-(d - 1), k + d + 1)
    t[d - 1] = a
    t[k + d] = b
    return KnotVector(t, d)


def place_quantile_clamped(x, k, d, domain=None):
    """
    Domain knots at equal quantiles of the sample, boundaries repeated d times.

    The smallest and largest observations are replaced by ``min(a, x1)`` and
    ``max(b, xn)`` before the quantiles are taken, so the outer quantiles hit
    the domain boundaries exactly.
    """
    k, d = _check_counts(k, d)
    x = np.sort(np.asarray(x, dtype=float).ravel())
    if len(x) < 2:
        raise InvalidArgumentError(f'need at least 2 observations for quantile knots, got {len(x)}')
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError('observations must be finite')
    a, b = _check_domain(domain if domain is not None else (x[0], x[-1]))
    if x[0] < a or x[-1] > b:
        raise InvalidArgumentError(f'observations range [{x[0]}, {x[-1]}] falls outside the domain [{a}, {b}]')

    z = x.copy()
    z[0] = min(a, x[0])
    z[-1] = max(b, x[-1])
    levels = np.linspace(0.0, 1.0, k + 2)
    quantiles = np.quantile(z, levels, method='linear')
    interior = quantiles[1:-1]

    for level, left, right in zip(levels[1:-1], np.r_[a, interior[:-1]], interior):
        if not right > left:
            raise KnotPlacementError(
                f'quantile knot at level {level:.6g} coincides with its neighbour ({right:g}); lower k',
                level=float(level),
            )
    if len(interior) and not interior[-1] < b:
        raise KnotPlacementError(
            f'quantile knot at level {levels[-2]:.6g} coincides with the upper boundary; lower k',
            level=float(levels[-2]),
        )

    t = np.concatenate([np.full(d, a), interior, np.full(d, b)])
    logger.debug(f'Placed {k} quantile knots for order {d} on [{a:g}, {b:g}]')
    return KnotVector(t, d)


def place_knots(strategy, x, k, d, domain=None):
    """Dispatch on the knot strategy name used by commands and endpoints"""
    if strategy == 'uniform':
        if domain is None:
            x = np.asarray(x, dtype=float)
            domain = (float(np.min(x)), float(np.max(x)))
        return place_uniform(domain, k, d)
    if strategy == 'quantile':
        return place_quantile_clamped(x, k, d, domain=domain)
    raise InvalidArgumentError(f'unknown knot strategy {strategy!r}')


def lag_weights(kv, i):
    """
    Divisors of the i-th order-1 difference step (i = 1 .. d-1).

    Returns ``p - i`` values ``(t[j + q] - t[j]) / q`` with ``q = d - i`` for the
    0-based ``j = i .. p - 1``.
    """
    d, p = kv.d, kv.p
    if not 1 <= i <= d - 1:
        raise InvalidArgumentError(f'lag step must be in 1..{d - 1}, got {i}')
    q = d - i
    j = np.arange(i, p)
    return (kv.t[j + q] - kv.t[j]) / q
