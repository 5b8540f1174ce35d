import json

import numpy as np
import pytest

from apps.fitting.services.curve import ESTIMATORS
from apps.simulations.services import studies
from apps.simulations.services.studies import (
    build_study_config,
    replicate_rng,
    run_replicate,
    run_study,
    simulate_data,
    write_study_outputs,
)
from apps.splines.exceptions import ConfigurationError, InvalidArgumentError
from apps.splines.services.io import read_meta


@pytest.fixture
def small_ucurve():
    return build_study_config(study='ucurve', N=3, n=200, k=20, seed=4, workers=1)


class TestStudyConfig:

    def test_ucurve_defaults(self):
        cfg = build_study_config(study='ucurve')
        assert (cfg.n, cfg.d, cfg.k, cfg.m, cfg.N) == (500, 4, 100, [2], 100)
        assert cfg.domain == (-3.0, 3.0)

    def test_random_defaults_follow_the_order(self):
        cfg = build_study_config(study='random', d=3)
        assert cfg.k == 87
        assert cfg.m == [1, 2]
        assert cfg.n == 1000

    def test_none_values_take_defaults(self):
        assert build_study_config(study='mixture1', n=None, k=None).n == 1000

    def test_orders_are_bounded_by_the_degree(self):
        with pytest.raises(InvalidArgumentError, match='outside 1..1'):
            build_study_config(study='ucurve', d=2, m=[2])

    def test_unknown_study(self):
        with pytest.raises(InvalidArgumentError):
            build_study_config(study='sine')

    def test_describe_leaves_out_workers(self, small_ucurve):
        assert 'workers' not in small_ucurve.describe()
        assert small_ucurve.describe()['seed'] == 4


class TestReplicates:

    def test_data_depends_only_on_seed_and_index(self, small_ucurve):
        first = simulate_data(small_ucurve, replicate_rng(4, 2))
        again = simulate_data(small_ucurve, replicate_rng(4, 2))
        other = simulate_data(small_ucurve, replicate_rng(4, 3))
        np.testing.assert_array_equal(first.y, again.y)
        assert not np.array_equal(first.x, other.x)

    def test_ucurve_noise_is_a_tenth_of_the_range(self, small_ucurve):
        data = simulate_data(small_ucurve, replicate_rng(4, 0))
        assert data.sigma == pytest.approx(0.1 * 27 / 8)
        assert np.all(np.diff(data.x) >= 0)

    def test_random_study_noise_scales_with_the_signal(self):
        cfg = build_study_config(study='random', N=1, n=300, d=3, k=10, gamma=0.5)
        data = simulate_data(cfg, replicate_rng(cfg.seed, 0))
        assert data.sigma == pytest.approx(0.5 * data.signal_sd)
        assert 'extrema' in data.extras

    def test_every_estimator_is_fitted_to_the_same_data(self, small_ucurve):
        records, failures = run_replicate(small_ucurve, 0)
        assert not failures
        assert [r['flavor'] for r in records] == list(ESTIMATORS)
        assert len({r['sigma'] for r in records}) == 1
        assert all(r['delta'] > 0 for r in records)


class TestRunStudy:

    def test_summary(self, small_ucurve):
        progress = []
        result = run_study(small_ucurve, progress=lambda done, total: progress.append((done, total)))
        assert progress[-1] == (3, 3)
        summary = result.summary()
        assert summary['replicates'] == 3
        assert summary['failures'] == 0
        assert len(summary['groups']) == 4
        for group in summary['groups']:
            assert group['count'] == 3
            assert group['min'] <= group['median'] <= group['max']
        assert result.median('general', 2) == pytest.approx(np.median(result.deltas('general', 2)))

    def test_failed_fits_are_excluded(self, small_ucurve, monkeypatch):
        fit_curve = studies.fit_curve

        def refuse_naive(x, y, options):
            if options.force_naive:
                raise ConfigurationError('refused')
            return fit_curve(x, y, options)

        monkeypatch.setattr(studies, 'fit_curve', refuse_naive)
        result = run_study(small_ucurve)
        summary = result.summary()
        assert summary['failures'] == 3
        assert {f['flavor'] for f in summary['failed_fits']} == {'naive'}
        naive = next(g for g in summary['groups'] if g['flavor'] == 'naive')
        assert naive['count'] == 0 and 'median' not in naive
        assert np.isnan(result.median('naive', 2))

    def test_mixture_records_curvature(self):
        cfg = build_study_config(study='mixture2', N=2, n=300, k=15, seed=1)
        result = run_study(cfg)
        assert all('curvature_at_zero' in r for r in result.records)
        shares = result.summary()['curvature_sign_match']
        assert set(shares) == set(ESTIMATORS)
        assert all(0 <= share <= 1 for share in shares.values())

    def test_outputs(self, small_ucurve, tmp_path):
        paths = write_study_outputs(run_study(small_ucurve), tmp_path / 'out')
        assert [p.name for p in paths] == ['replicates.csv', 'boxplot.csv', 'summary.json']

        header = (tmp_path / 'out' / 'replicates.csv').read_text().splitlines()
        assert header[0].startswith('# tool:')
        columns = next(line for line in header if not line.startswith('#'))
        assert columns == 'replicate,flavor,m,delta,sigma,signal_sd,lambda,edf'

        meta = read_meta((tmp_path / 'out' / 'boxplot.csv').read_text().splitlines())
        assert meta['seed'] == 4
        assert meta['config']['study'] == 'ucurve'
        assert 'seed' not in meta['config']

        summary = json.loads((tmp_path / 'out' / 'summary.json').read_text())
        assert list(summary)[0] == 'meta'
        assert summary['study'] == 'ucurve'


def test_worker_count_does_not_change_results(tmp_path):
    cfg = build_study_config(study='random', N=3, n=150, d=3, k=10, m=[2], seed=9, workers=1)
    serial = run_study(cfg)
    parallel = run_study(cfg.model_copy(update={'workers': 2}))
    assert serial.records == parallel.records

    write_study_outputs(serial, tmp_path / 'serial')
    write_study_outputs(parallel, tmp_path / 'parallel')
    for name in ('replicates.csv', 'boxplot.csv', 'summary.json'):
        assert (tmp_path / 'serial' / name).read_bytes() == (tmp_path / 'parallel' / name).read_bytes()
