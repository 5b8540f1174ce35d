"""
Piecewise-linear "tent" sampling density on [0, 1].

The unnormalized density is ``1`` everywhere plus a triangular bump of height
``peak_ratio - 1`` and half-width ``half_width`` centred on every extremum,
so a lone peak stands ``peak_ratio`` times above the floor. Overlapping bumps
add up. Sampling inverts the piecewise-quadratic CDF exactly.
"""
import numpy as np
from django.conf import settings

from apps.splines.exceptions import InvalidArgumentError


class TentDensity:

    def __init__(self, extrema, half_width=None, peak_ratio=None, domain=(0.0, 1.0)):
        self.half_width = float(half_width if half_width is not None
                                else getattr(settings, 'PSPLINES_TENT_HALF_WIDTH', 0.08))
        self.peak_ratio = float(peak_ratio if peak_ratio is not None
                                else getattr(settings, 'PSPLINES_TENT_PEAK_RATIO', 4.0))
        if self.half_width <= 0:
            raise InvalidArgumentError(f'tent half-width must be positive, got {self.half_width}')
        if self.peak_ratio < 1:
            raise InvalidArgumentError(f'tent peak ratio must be at least 1, got {self.peak_ratio}')
        self.lo, self.hi = (float(v) for v in domain)
        self.extrema = np.sort(np.asarray(extrema, dtype=float).ravel())

        points = [self.lo, self.hi]
        for e in self.extrema:
            points.extend([e - self.half_width, e, e + self.half_width])
        nodes = np.unique(np.clip(points, self.lo, self.hi))
        heights = self._unnormalized(nodes)
        areas = np.diff(nodes) * (heights[:-1] + heights[1:]) / 2.0

        self.nodes = nodes
        self.total = float(areas.sum())
        self.heights = heights / self.total
        self.cumulative = np.concatenate([[0.0], np.cumsum(areas) / self.total])
        self.slopes = np.diff(self.heights) / np.diff(nodes)

    @property
    def is_uniform(self):
        return len(self.extrema) == 0 or self.peak_ratio == 1

    def _unnormalized(self, x):
        x = np.asarray(x, dtype=float)
        bumps = np.zeros_like(x)
        for e in self.extrema:
            bumps += np.clip(1.0 - np.abs(x - e) / self.half_width, 0.0, None)
        return 1.0 + (self.peak_ratio - 1.0) * bumps

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, self._unnormalized(x) / self.total, 0.0)

    def _segment(self, x):
        return np.clip(np.searchsorted(self.nodes, x, side='right') - 1, 0, len(self.nodes) - 2)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        i = self._segment(x)
        dz = x - self.nodes[i]
        return self.cumulative[i] + self.heights[i] * dz + 0.5 * self.slopes[i] * dz ** 2

    def ppf(self, u):
        """Inverse CDF"""
        u = np.asarray(u, dtype=float)
        if np.any((u < 0) | (u > 1)):
            raise InvalidArgumentError('probabilities must lie in [0, 1]')
        i = np.clip(np.searchsorted(self.cumulative, u, side='right') - 1, 0, len(self.nodes) - 2)
        area = u - self.cumulative[i]
        h, s = self.heights[i], self.slopes[i]
        # root of s/2 dz^2 + h dz = area written without cancellation
        dz = 2.0 * area / (h + np.sqrt(np.maximum(h * h + 2.0 * s * area, 0.0)))
        return np.clip(self.nodes[i] + dz, self.nodes[i], self.nodes[i + 1])

    def sample(self, n, rng):
        if int(n) != n or n < 1:
            raise InvalidArgumentError(f'sample size must be a positive integer, got {n}')
        return self.ppf(rng.uniform(size=int(n)))

    def describe(self):
        return {
            'half_width': self.half_width,
            'peak_ratio': self.peak_ratio,
            'extrema': self.extrema.tolist(),
        }


def sample_tent(extrema, n, seed, half_width=None, peak_ratio=None):
    """n draws from the tent density; uniform on [0, 1] when there are no extrema"""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return TentDensity(extrema, half_width=half_width, peak_ratio=peak_ratio).sample(n, rng)
