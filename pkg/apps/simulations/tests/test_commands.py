import io
import json

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError


def run(*args):
    out = io.StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def test_simulate_writes_outputs(tmp_path):
    output = run('simulate', '--study', 'ucurve', '--N', '2', '--n', '150', '--k', '10', '--out', str(tmp_path))
    for name in ('replicates.csv', 'boxplot.csv', 'summary.json'):
        assert (tmp_path / name).exists()
    assert output.count('median delta') == 4
    summary = json.loads((tmp_path / 'summary.json').read_text())
    assert summary['meta']['seed'] == 0


def test_simulate_rejects_bad_orders(tmp_path):
    with pytest.raises(CommandError) as excinfo:
        run('simulate', '--study', 'random', '--degree', '2', '--m', '3', '--out', str(tmp_path))
    assert excinfo.value.returncode == 2


def test_simulate_needs_a_study():
    with pytest.raises(CommandError) as excinfo:
        run('simulate')
    assert excinfo.value.returncode == 1


def test_verify_selected_criteria():
    output = run('verify', '--only', 'golden_general_diff', 'uniform_reduction')
    assert 'golden_general_diff' in output
    assert 'FAIL' not in output
    assert output.count('PASS') == 2


def test_verify_json():
    report = json.loads(run('verify', '--json', '--seed', '5', '--only', 'golden_standard_diff'))
    assert report['seed'] == 5
    assert report['passed'] is True


def test_verify_failure_exits_with_three(tmp_path):
    golden = tmp_path / 'golden.json'
    golden.write_text(json.dumps({'d': 4, 'knots': [0, 0, 0, 0, 1, 3, 4, 4, 4, 4],
                                  'general': {'1': [['1'] * 6] * 5}, 'standard': []}))
    with pytest.raises(CommandError) as excinfo:
        run('verify', '--golden-file', str(golden), '--only', 'golden_general_diff')
    assert excinfo.value.returncode == 3
