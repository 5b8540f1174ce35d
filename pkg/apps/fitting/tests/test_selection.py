import numpy as np
import pytest

from apps.fitting.services.selection import lambda_grid, select_lambda
from apps.fitting.services.solver import FitConfig, PenalizedSystem
from apps.splines.services.basis import BasisSpec
from apps.splines.services.knots import place_quantile_clamped, place_uniform
from apps.splines.services.penalty import build_penalty


@pytest.fixture
def problem(rng):
    x = np.sort(rng.uniform(0, 1, 200))
    y = np.sin(3 * np.pi * x) + 0.2 * rng.normal(size=x.size)
    kv = place_quantile_clamped(x, 15, 4, domain=(0, 1))
    cfg = FitConfig(basis=BasisSpec(kv), penalty=build_penalty(kv, 2, 'difference-general'))
    return x, y, cfg


def test_grid_is_centred_on_scale(problem):
    x, y, cfg = problem
    system = PenalizedSystem(x, y, cfg.basis, cfg.penalty)
    grid = lambda_grid(cfg, system)
    assert len(grid) == cfg.grid_points
    assert (grid[0] + grid[-1]) / 2 == pytest.approx(np.log10(system.scale()) + (cfg.log10_min + cfg.log10_max) / 2)


def test_selected_lambda_beats_the_grid(problem):
    x, y, cfg = problem
    result = select_lambda(x, y, cfg)
    scores = [score for score in result.gcv_path['gcv'] if score is not None]
    assert result.gcv <= min(scores) * (1 + 1e-12)
    assert not result.flat_gcv
    assert 2 < result.edf < cfg.basis.p


def test_path_is_recorded(problem):
    x, y, cfg = problem
    result = select_lambda(x, y, cfg)
    path = result.gcv_path
    assert len(path['log10_lambda']) == len(path['gcv']) == len(path['edf']) == cfg.grid_points
    assert np.all(np.diff(path['edf']) <= 1e-6)


def test_selection_is_deterministic(problem):
    x, y, cfg = problem
    first, second = select_lambda(x, y, cfg), select_lambda(x, y, cfg)
    assert first.lam == second.lam
    np.testing.assert_array_equal(first.beta, second.beta)


def test_flat_gcv_returns_largest_lambda(problem):
    x, _, cfg = problem
    result = select_lambda(x, np.zeros_like(x), cfg)
    assert result.flat_gcv
    assert result.lam == pytest.approx(10.0 ** result.gcv_path['log10_lambda'][-1])


def test_narrower_search_range(problem):
    x, y, cfg = problem
    narrow = cfg.model_copy(update={'log10_min': -1.0, 'log10_max': 1.0, 'grid_points': 5})
    result = select_lambda(x, y, narrow)
    assert len(result.gcv_path['gcv']) == 5


@pytest.mark.parametrize('flavor', ['difference-general', 'derivative'])
@pytest.mark.parametrize('m', [1, 2])
def test_noise_free_polynomial_reaches_the_null_space(flavor, m):
    x = np.linspace(0, 1, 100)
    y = np.polynomial.polynomial.polyval(x, [1.0, 2.0, -0.5][:m])
    kv = place_quantile_clamped(x, 10, 4, domain=(0, 1))
    cfg = FitConfig(basis=BasisSpec(kv), penalty=build_penalty(kv, m, flavor))
    result = select_lambda(x, y, cfg)
    assert result.flat_gcv
    assert result.lam == pytest.approx(10.0 ** result.gcv_path['log10_lambda'][-1])
    assert result.rss < 1e-16 * len(x)
    assert abs(result.edf - m) < 1e-6


def test_fewer_points_than_coefficients_avoids_interpolation(rng):
    x = np.sort(rng.uniform(0, 1, 12))
    y = np.cos(4 * x) + 0.1 * rng.normal(size=x.size)
    kv = place_uniform((0, 1), 20, 4)
    cfg = FitConfig(basis=BasisSpec(kv), penalty=build_penalty(kv, 2, 'difference-general'))
    result = select_lambda(x, y, cfg)
    assert np.isfinite(result.gcv)
    assert result.edf < len(x) * (1 - 1e-6)
