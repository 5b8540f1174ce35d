"""
True signals and x-designs of the simulation studies.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect
from scipy.stats import norm

from apps.splines.exceptions import InvalidArgumentError
from apps.splines.services.basis import BasisSpec, eval_spline
from apps.splines.services.knots import place_uniform

EXTREMA_GRID_POINTS = 2001

MIXTURE_SIGNAL = ((0.5, -1.0, 0.5), (0.5, 1.0, 0.8))
MIXTURE_SCHEMES = {
    1: ((1 / 3, -1.0, 0.35), (1 / 3, 1.0, 0.35), (1 / 3, 0.0, 0.2)),
    2: ((0.5, -1.0, 0.35), (0.5, 1.0, 0.35)),
}


@dataclass(frozen=True)
class RandomCurve:
    basis: BasisSpec
    beta: np.ndarray
    extrema: np.ndarray

    def __call__(self, x, m=0):
        return eval_spline(self.basis, self.beta, x, m)


def find_extrema(curve_derivative, lo, hi, points=EXTREMA_GRID_POINTS):
    """Interior roots of f' located by sign changes on a grid and refined by bisection"""
    grid = np.linspace(lo, hi, points)
    slope = curve_derivative(grid)
    changes = np.flatnonzero(slope[:-1] * slope[1:] < 0)
    return np.array([bisect(curve_derivative, grid[i], grid[i + 1], xtol=1e-14) for i in changes])


def random_spline(d, seed):
    """
    Random order-d spline on [0, 1] over 4d equidistant knots (2d interior),
    with 3d coefficients drawn uniformly from [-1, 1].
    """
    if int(d) != d or d < 2:
        raise InvalidArgumentError(f'random splines need order d >= 2, got {d}')
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = int(d)
    basis = BasisSpec(place_uniform((0.0, 1.0), 2 * d, d))
    beta = rng.uniform(-1.0, 1.0, size=basis.p)
    extrema = find_extrema(lambda x: eval_spline(basis, beta, x, 1), 0.0, 1.0)
    return RandomCurve(basis=basis, beta=beta, extrema=extrema)


def u_curve(x):
    return np.abs(x) ** 3 / 8.0


def normal_mixture(x, components=MIXTURE_SIGNAL):
    x = np.asarray(x, dtype=float)
    return sum(weight * norm.pdf(x, loc, scale) for weight, loc, scale in components)


def normal_mixture_curvature(x, components=MIXTURE_SIGNAL):
    """Second derivative of the mixture density"""
    x = np.asarray(x, dtype=float)
    return sum(
        weight * norm.pdf(x, loc, scale) * (((x - loc) / scale ** 2) ** 2 - 1.0 / scale ** 2)
        for weight, loc, scale in components
    )


def sample_u_design(n, rng, domain=(-3.0, 3.0)):
    """Uneven x on the domain: a + (b - a) * Beta(2, 2)"""
    a, b = domain
    return a + (b - a) * rng.beta(2.0, 2.0, size=int(n))


def sample_mixture_design(n, scheme, rng, domain=(-2.0, 2.0)):
    """Draws from the scheme's normal mixture, redrawn until inside the domain"""
    if scheme not in MIXTURE_SCHEMES:
        raise InvalidArgumentError(f'unknown sampling scheme {scheme!r}; expected 1 or 2')
    components = MIXTURE_SCHEMES[scheme]
    weights = np.array([c[0] for c in components])
    locs = np.array([c[1] for c in components])
    scales = np.array([c[2] for c in components])
    a, b = domain

    accepted = np.empty(0)
    while len(accepted) < n:
        size = int(n) - len(accepted)
        which = rng.choice(len(components), size=size, p=weights / weights.sum())
        draws = rng.normal(locs[which], scales[which])
        accepted = np.concatenate([accepted, draws[(draws >= a) & (draws <= b)]])
    return accepted[:int(n)]
