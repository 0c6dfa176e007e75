"""
Tests for the command line surface.
"""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from harness import STUDY_COLUMNS


@pytest.fixture
def runner():
    return CliRunner()


def write_values(tmp_path, values, name='series.csv', header='value'):
    path = tmp_path / name
    path.write_text(header + '\n' + '\n'.join(repr(float(v)) for v in values) + '\n', encoding='utf-8')
    return str(path)


class TestSimulateCommands:

    def test_simulate_moving_maxima(self, cli, runner):
        result = runner.invoke(cli, ['--seed', '3', 'simulate', 'MM', '-n', '100'])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == 'value'
        assert len(lines) == 101

    def test_simulate_is_reproducible(self, cli, runner):
        args = ['--seed', '3', 'simulate', 'MAR', '-n', '50', '--param', 'phi=0.7']
        assert runner.invoke(cli, args).stdout == runner.invoke(cli, args).stdout

    def test_simulate_bad_param(self, cli, runner):
        result = runner.invoke(cli, ['simulate', 'MAR', '-n', '50', '--param', 'phi=1.5'])
        assert result.exit_code == 2

    def test_mm_check(self, cli, runner):
        result = runner.invoke(cli, ['mm-check', '--weights', '2/6,1/6,3/6', '--k', '2', '--k', '3'])
        assert result.exit_code == 0, result.output
        assert result.stdout.splitlines() == [
            'k,holds,witness_l,witness_j,theta',
            '2,False,1,0,0.5',
            '3,True,,,0.5',
        ]

    def test_mm_check_smallest_k(self, cli, runner):
        result = runner.invoke(cli, ['mm-check', '--k-max', '5'])
        assert result.exit_code == 0, result.output
        assert 'smallest k with D(k): 3' in result.stderr
        assert len(result.stdout.splitlines()) == 6

    def test_oracle(self, cli, runner):
        result = runner.invoke(cli, ['--seed', '4', 'oracle', 'MAR', '-n', '20000', '--block', '100',
                                     '--tau', '1', '--tau', '2'])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == 'tau,theta'
        assert [line.split(',')[0] for line in lines[1:]] == ['1.0', '2.0']
        assert 'reference theta 0.5' in result.stderr


class TestEstimateCommands:

    def test_estimate(self, cli, runner, tmp_path, rng):
        path = write_values(tmp_path, rng.random(5000))
        result = runner.invoke(cli, ['estimate', path, '-e', 'FDIR', '-e', 'RUNS', '--k', '3'])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == 'estimator,k,level,n_exceedances,value,raw'
        assert [line.split(',')[0] for line in lines[1:]] == ['FDIR', 'RUNS']

    def test_bad_row_exits_with_data_error(self, cli, runner, tmp_path):
        path = tmp_path / 'bad.csv'
        path.write_text('value\n1.0\noops\n2.0\n', encoding='utf-8')
        result = runner.invoke(cli, ['estimate', str(path), '--k', '3'])
        assert result.exit_code == 3
        assert 'Row 3' in result.stderr

    def test_unknown_estimator(self, cli, runner, tmp_path, rng):
        path = write_values(tmp_path, rng.random(100))
        result = runner.invoke(cli, ['estimate', path, '-e', 'HILL', '--k', '3'])
        assert result.exit_code == 2

    def test_degenerate_series(self, cli, runner, tmp_path):
        path = write_values(tmp_path, [1.0] * 20)
        result = runner.invoke(cli, ['estimate', path, '-e', 'FDIR', '--k', '2', '-q', '0.5'])
        assert result.exit_code == 4

    def test_conflicting_levels(self, cli, runner, tmp_path, rng):
        path = write_values(tmp_path, rng.random(100))
        result = runner.invoke(cli, ['estimate', path, '--k', '3', '-q', '0.9', '--tau', '5'])
        assert result.exit_code == 2

    def test_cycles(self, cli, runner, tmp_path):
        path = write_values(tmp_path, [1, 5, 2, 4, 3, 9, 7])
        result = runner.invoke(cli, ['cycles', path, '--k', '3'])
        assert result.stdout.splitlines() == ['value', '5.0', '4.0', '9.0']

    def test_ingest(self, cli, runner, tmp_path):
        path = write_values(tmp_path, [100, 100, 110], header='price')
        result = runner.invoke(cli, ['ingest', path])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == 'log_return'
        assert float(lines[1]) == pytest.approx(np.log(1.1))

    def test_out_writes_file(self, cli, runner, tmp_path):
        path = write_values(tmp_path, [100, 110, 121], header='price')
        out = tmp_path / 'returns.csv'
        result = runner.invoke(cli, ['--out', str(out), 'ingest', path])
        assert result.exit_code == 0, result.output
        assert result.stdout == ''
        assert out.read_text(encoding='utf-8').splitlines()[0] == 'log_return'

    def test_report_markdown(self, cli, runner, tmp_path, rng):
        path = write_values(tmp_path, rng.random(5000))
        result = runner.invoke(cli, ['--format', 'markdown', 'report', path, '--k', '3'])
        assert result.exit_code == 0, result.output
        assert '| FDIR' in result.stdout
        assert 'FINDTDC' in result.stdout


class TestDiagnoseCommand:

    def test_k_selection(self, cli, runner, tmp_path, mm_series):
        path = write_values(tmp_path, mm_series)
        result = runner.invoke(cli, ['diagnose', path, '--select', '--k-max', '5'])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == 'k,d_k,p_k,gap,forward_gap'
        assert len(lines) == 6
        assert 'recommended k: 3' in result.stderr

    def test_trajectory_grid(self, cli, runner, tmp_path, mm_series):
        path = write_values(tmp_path, mm_series)
        result = runner.invoke(cli, ['diagnose', path, '--k', '3', '--grid', '2000,5000,10000'])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == 'm,k,tau,s,r,statistic,value'
        assert [line.split(',')[0] for line in lines[1:]] == ['2000', '5000', '10000']


class TestStudyCommand:

    def study_file(self, tmp_path):
        document = {
            'model': {'id': 'MM', 'signature': [[1, 0, '2/6'], [1, 1, '1/6'], [1, 2, '3/6']]},
            'n': 500, 'replicates': 3, 'k': 3, 'quantiles': [0.95], 'estimators': ['FDIR', 'RUNS'],
        }
        path = tmp_path / 'study.json'
        path.write_text(json.dumps(document), encoding='utf-8')
        return str(path)

    def test_study(self, cli, runner, tmp_path):
        result = runner.invoke(cli, ['study', self.study_file(tmp_path)])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == ','.join(STUDY_COLUMNS)
        assert len(lines) == 3
        assert 'reference theta 0.5' in result.stderr

    def test_config_option(self, cli, runner, tmp_path):
        result = runner.invoke(cli, ['--config', self.study_file(tmp_path), '--format', 'markdown',
                                     'study', '--replicates', '2'])
        assert result.exit_code == 0, result.output
        assert 'rmse q0.95' in result.stdout

    def test_missing_config(self, cli, runner):
        result = runner.invoke(cli, ['study'])
        assert result.exit_code == 2

    def test_seed_overrides_master_seed(self, cli, runner, tmp_path):
        path = self.study_file(tmp_path)
        default = runner.invoke(cli, ['study', path])
        zero = runner.invoke(cli, ['--seed', '0', 'study', path])
        five = runner.invoke(cli, ['--seed', '5', 'study', path])
        six = runner.invoke(cli, ['--seed', '6', 'study', path])
        for result in (default, zero, five, six):
            assert result.exit_code == 0, result.output
        assert zero.stdout == default.stdout
        assert five.stdout != six.stdout
        assert five.stdout == runner.invoke(cli, ['--seed', '5', 'study', path]).stdout
