import io
import json

import numpy as np
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from apps.splines.services.io import read_csv


def run(*args):
    out = io.StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


@pytest.fixture
def knot_file(tmp_path):
    path = tmp_path / 'knots.json'
    path.write_text(json.dumps({'d': 4, 't': [0, 0, 0, 0, 1, 3, 4, 4, 4, 4]}))
    return path


class TestPenaltyCommand:

    def test_writes_all_matrices(self, tmp_path, knot_file):
        output = run('penalty', '--knots', str(knot_file), '-m', '3', '--out-dir', str(tmp_path), '--triplets')
        assert 'p=6' in output
        for name in ('D', 'Sbar', 'S', 'K', 'D_triplets', 'K_triplets'):
            assert (tmp_path / f'{name}.csv').exists()
        D, meta = read_csv(tmp_path / 'D.csv')
        np.testing.assert_allclose(D[0], [-6, 26 / 3, -19 / 6, 1 / 2, 0, 0], rtol=1e-12)
        assert meta['config']['m'] == 3
        assert meta['seed'] == 0

    def test_check_reports_max_deviation(self, tmp_path, knot_file):
        output = run('penalty', '--knots', str(knot_file), '--out-dir', str(tmp_path), '--check')
        assert 'max dev < 1e-08' in output

    def test_check_random(self, tmp_path):
        output = run('penalty', '--domain', '0', '1', '--k', '5', '--out-dir', str(tmp_path), '--check-random', '10')
        assert 'max dev < 1e-08' in output
        assert '10 configuration(s)' in output

    def test_order_bound_is_a_validation_error(self, tmp_path, knot_file):
        with pytest.raises(CommandError) as excinfo:
            run('penalty', '--knots', str(knot_file), '-m', '4', '--out-dir', str(tmp_path))
        assert excinfo.value.returncode == 2
        assert 'm <= d - 1' in str(excinfo.value)

    def test_failed_check_exits_with_three(self, tmp_path, knot_file):
        with pytest.raises(CommandError) as excinfo:
            run('penalty', '--knots', str(knot_file), '--out-dir', str(tmp_path), '--check', '--tolerance', '1e-300')
        assert excinfo.value.returncode == 3

    def test_unknown_flag_is_a_usage_error(self):
        with pytest.raises(CommandError) as excinfo:
            run('penalty', '--bogus')
        assert excinfo.value.returncode == 1


class TestKnotsCommand:

    def test_uniform_csv_to_stdout(self):
        output = run('knots', '--domain', '0', '1', '--k', '3', '--degree', '1')
        assert output.startswith('# tool: psplines')
        data, meta = read_csv(io.StringIO(output))
        np.testing.assert_allclose(data[:, 0], [-0.25, 0, 0.25, 0.5, 0.75, 1, 1.25])
        assert meta['d'] == 2

    def test_quantile_json(self, tmp_path):
        data = tmp_path / 'x.csv'
        data.write_text('\n'.join(str(v) for v in np.linspace(0, 1, 21)))
        out = tmp_path / 'knots.json'
        run('knots', '--strategy', 'quantile', '--data', str(data), '--k', '3', '--format', 'json', '--out', str(out))
        document = json.loads(out.read_text())
        assert document['d'] == 4
        assert document['t'][:4] == [0.0] * 4
        assert document['t'][4:7] == pytest.approx([0.25, 0.5, 0.75])

    def test_quantile_needs_data(self):
        with pytest.raises(CommandError) as excinfo:
            run('knots', '--strategy', 'quantile')
        assert excinfo.value.returncode == 1

    def test_validate_valid_file(self, knot_file):
        report = json.loads(run('knots', '--validate', str(knot_file)))
        assert report['is_valid'] is True
        assert report['p'] == 6

    def test_validate_invalid_file(self, tmp_path):
        path = tmp_path / 'bad.csv'
        path.write_text('# d: 2\n0\n0\n1\n0.5\n2\n2\n')
        with pytest.raises(CommandError) as excinfo:
            run('knots', '--validate', str(path))
        assert excinfo.value.returncode == 2
        assert 'not nondecreasing' in str(excinfo.value)
