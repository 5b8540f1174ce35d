"""
GCV selection of the smoothing parameter.

A coarse grid over log10 λ finds the basin; a bounded scalar minimizer then
refines between the grid neighbours of the best point.
"""
import logging
from dataclasses import replace

import numpy as np
from scipy.optimize import minimize_scalar

from apps.splines.exceptions import NumericalError

from .solver import PenalizedSystem

logger = logging.getLogger(__name__)


def lambda_grid(cfg, system):
    shift = np.log10(system.scale())
    return np.linspace(cfg.log10_min, cfg.log10_max, cfg.grid_points) + shift


def _top_of_grid(system, top):
    """
    Coefficients at the top of a flat grid, taken from the λ = ∞ limit.

    A direct solve there loses accuracy in proportion to λ.
    """
    try:
        limit = system.null_space_fit()
    except NumericalError as exc:
        logger.warning(f'Falling back to the direct solve at the top of the grid: {exc}')
        return top
    return replace(limit, lam=top.lam)


def select_lambda(x, y, cfg, system=None):
    """
    Minimize GCV over λ and return the refit at the winner.

    When GCV is flat across the whole grid the largest λ is returned with
    ``flat_gcv`` set and the coefficients of the λ = ∞ limit.
    """
    system = system or PenalizedSystem(x, y, cfg.basis, cfg.penalty)
    grid = lambda_grid(cfg, system)
    fits = [system.fit(10.0 ** log_lam) for log_lam in grid]
    scores = np.array([fit.gcv for fit in fits])
    for log_lam, fit in zip(grid, fits):
        logger.debug(f'GCV grid log10(lambda)={log_lam:.3f}: gcv={fit.gcv:.6g}, edf={fit.edf:.4f}')

    path = {
        'log10_lambda': grid.tolist(),
        'gcv': [score if np.isfinite(score) else None for score in scores.tolist()],
        'edf': [fit.edf for fit in fits],
    }

    finite = np.isfinite(scores)
    flat = not finite.any() or (
        np.ptp(scores[finite]) <= cfg.flat_tolerance * max(1.0, abs(float(np.min(scores[finite]))))
        and finite.all()
    )
    if flat:
        logger.warning(f'GCV is flat over the lambda grid; returning the largest lambda {10.0 ** grid[-1]:g}')
        return replace(_top_of_grid(system, fits[-1]), flat_gcv=True, gcv_path=path)

    # argmin returns the first minimum, i.e. the smallest lambda on ties
    best = int(np.argmin(np.where(finite, scores, np.inf)))
    lower = grid[max(best - 1, 0)]
    upper = grid[min(best + 1, len(grid) - 1)]
    winner = fits[best]
    if upper > lower:
        refined = minimize_scalar(
            lambda log_lam: system.fit(10.0 ** log_lam).gcv,
            bounds=(lower, upper),
            method='bounded',
            options={'xatol': cfg.tolerance},
        )
        if refined.success and refined.fun < winner.gcv:
            winner = system.fit(10.0 ** refined.x)

    logger.info(f'Selected lambda={winner.lam:.6g} (edf={winner.edf:.3f}, gcv={winner.gcv:.6g})')
    return replace(winner, gcv_path=path)
