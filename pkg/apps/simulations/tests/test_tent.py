import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats
from scipy.integrate import trapezoid

from apps.simulations.services.tent import TentDensity, sample_tent
from apps.splines.exceptions import InvalidArgumentError


def test_no_extrema_is_uniform():
    tent = TentDensity([])
    assert tent.is_uniform
    x = sample_tent([], 5000, seed=11)
    assert x.min() >= 0 and x.max() <= 1
    assert stats.kstest(x, 'uniform').pvalue > 1e-3


def test_peak_stands_above_the_floor():
    tent = TentDensity([0.5], half_width=0.08, peak_ratio=4.0)
    assert tent.pdf(0.5) / tent.pdf(0.1) == pytest.approx(4.0)
    assert tent.pdf(0.5 + 0.04) / tent.pdf(0.1) == pytest.approx(2.5)
    assert tent.pdf(1.5) == 0


@pytest.mark.parametrize('extrema', [[0.5], [0.02, 0.5, 0.55], [0.0, 1.0], []])
def test_density_integrates_to_one(extrema):
    tent = TentDensity(extrema)
    grid = np.unique(np.concatenate([np.linspace(0, 1, 20001), tent.nodes]))
    assert trapezoid(tent.pdf(grid), grid) == pytest.approx(1.0, rel=1e-12)
    assert tent.cdf(1.0) == pytest.approx(1.0, rel=1e-12)
    assert tent.cdf(0.0) == 0.0


@pytest.mark.parametrize('extrema', [[0.5], [0.02, 0.5, 0.55], [0.3, 0.31]])
def test_inverse_cdf(extrema):
    tent = TentDensity(extrema, peak_ratio=6.0)
    u = np.linspace(0, 1, 1001)
    np.testing.assert_allclose(tent.cdf(tent.ppf(u)), u, atol=1e-12)
    assert np.all(np.diff(tent.ppf(u)) >= 0)


def test_samples_follow_the_density():
    tent = TentDensity([0.5])
    x = tent.sample(20000, np.random.default_rng(5))
    near_peak = np.mean(np.abs(x - 0.5) <= 0.08)
    assert near_peak == pytest.approx(tent.cdf(0.58) - tent.cdf(0.42), abs=0.015)
    assert stats.kstest(x, tent.cdf).pvalue > 1e-3


def test_seed_determines_the_sample():
    np.testing.assert_array_equal(sample_tent([0.2, 0.7], 50, seed=3), sample_tent([0.2, 0.7], 50, seed=3))


def test_invalid_arguments():
    with pytest.raises(InvalidArgumentError):
        TentDensity([0.5], half_width=0)
    with pytest.raises(InvalidArgumentError):
        TentDensity([0.5], peak_ratio=0.5)
    with pytest.raises(InvalidArgumentError):
        TentDensity([0.5]).ppf([1.5])
    with pytest.raises(InvalidArgumentError):
        TentDensity([0.5]).sample(0, np.random.default_rng(0))


def test_describe_uses_settings_defaults(settings):
    settings.PSPLINES_TENT_PEAK_RATIO = 3.0
    assert TentDensity([0.5]).describe() == {'half_width': 0.08, 'peak_ratio': 3.0, 'extrema': [0.5]}


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(min_value=0.0, max_value=1.0), max_size=6),
    st.floats(min_value=0.01, max_value=0.3),
    st.floats(min_value=1.0, max_value=10.0),
    st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=30),
)
def test_inverse_cdf_round_trip(extrema, half_width, peak_ratio, u):
    tent = TentDensity(extrema, half_width=half_width, peak_ratio=peak_ratio)
    u = np.asarray(u)
    x = tent.ppf(u)
    assert np.all((x >= 0) & (x <= 1))
    np.testing.assert_allclose(tent.cdf(x), u, atol=1e-12)
