import csv
import io
import json
import math

import pytest

import cli.commands
from cli.commands import CounterexampleCase
from config import reset_config
from main import main
from models.quantum_state import save_state
from monogamy.audit import Verdict, audit
from monogamy.figures import build_figure
from states.catalog import w_state

QUIET = ['--log-level', 'ERROR']


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ('MONOGAMY_CONFIG', 'MONOGAMY_SEED', 'MONOGAMY_LOG_LEVEL', 'MONOGAMY_ROOF_RESTARTS'):
        monkeypatch.delenv(name, raising=False)
    yield
    reset_config()


def run(capsys, *args):
    code = main(QUIET + list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_measure_w_state_across_a_cut(capsys):
    code, out, _ = run(capsys, 'measure', '--state', 'w3', '--partition', '0:12')
    assert code == 0
    result = json.loads(out)
    assert result['dims'] == [2, 2, 2]
    assert result['measures']['concurrence']['value'] == pytest.approx(math.sqrt(8 / 9), abs=1e-12)
    assert result['measures']['negativity']['value'] == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-12)
    assert result['separable'] is None


def test_measure_w_state_pair(capsys):
    code, out, _ = run(capsys, 'measure', '--state', 'w3', '--partition', '0:1')
    assert code == 0
    result = json.loads(out)
    assert result['measures']['concurrence']['value'] == pytest.approx(2 / 3, abs=1e-12)
    assert result['measures']['negativity']['value'] == pytest.approx((math.sqrt(5) - 1) / 3, abs=1e-12)
    assert result['separable'] is False


def test_measure_ghz_pair_is_separable(capsys):
    code, out, _ = run(capsys, 'measure', '--state', 'ghz3', '--partition', '0:1')
    assert code == 0
    assert json.loads(out)['separable'] is True


def test_measure_reads_state_files(capsys, tmp_path):
    path = tmp_path / "w4.json"
    save_state(w_state(4), path)
    code, out, _ = run(capsys, 'measure', '--state', str(path), '--first', '0')
    assert code == 0
    assert json.loads(out)['measures']['concurrence']['value'] == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_audit_gsd_cren(capsys):
    code, out, _ = run(capsys, 'audit', '--state', 'gsd-example2', '--measure', 'cren', '--nu', '2')
    assert code == 0
    report = json.loads(out)
    rows = {row['bound_id']: row for row in report['results'][0]['rows']}
    assert rows['lemma3_N']['rhs_estimate'] == pytest.approx(math.sqrt(0.384), abs=1e-9)
    assert report['results'][0]['tightest'] == 'lemma3_N'


def test_audit_csv_to_file(capsys, tmp_path):
    code, _, _ = run(capsys, 'audit', '--state', 'w3', '--nu', '2', '3', '--format', 'csv',
                     '--out', 'reports/w3.csv')
    assert code == 0
    records = list(csv.DictReader(io.StringIO((tmp_path / "reports" / "w3.csv").read_text())))
    assert {record['verdict'] for record in records} == {Verdict.HOLDS.value}
    assert {record['label'] for record in records} == {'w3'}


def test_figure_two_csv(capsys):
    code, out, _ = run(capsys, 'figure', 'fig2', '--format', 'csv', '--nu', '2', '4')
    assert code == 0
    records = list(csv.DictReader(io.StringIO(out)))
    assert [float(r['nu']) for r in records] == [2.0, 4.0]
    at_two, at_four = records
    assert float(at_two['lhs']) == pytest.approx(0.64, abs=1e-12)
    assert float(at_two['lemma_bound']) == pytest.approx(math.sqrt(0.384), abs=1e-9)
    assert float(at_two['zhang2021_bound']) == pytest.approx(0.48, abs=1e-9)
    assert float(at_two['sum_bound']) == pytest.approx(0.48, abs=1e-9)
    assert float(at_four['lemma_bound']) == pytest.approx(0.384, abs=1e-9)
    assert float(at_four['zhang2021_bound']) == pytest.approx(0.2304, abs=1e-9)
    assert float(at_four['sum_bound']) == pytest.approx(0.128, abs=1e-9)


def test_figure_one_reports_discrepancies(capsys):
    code, _, err = run(capsys, 'figure', 'fig1', '--paper-values', '--nu', '2')
    assert code == 0
    assert 'DISCREPANCY' in err


def test_figure_two_has_no_quoted_values(capsys):
    code, _, err = run(capsys, 'figure', 'fig2', '--paper-values')
    assert code == 3
    assert 'ERROR' in err


def test_counterexamples(capsys):
    code, out, _ = run(capsys, 'counterexamples', '--nu', '2', '3', '--restarts', '2')
    assert code == 0
    results = json.loads(out)
    assert [r['state'] for r in results] == ['ou', 'kim-sanders']
    for result in results:
        assert result['holds']
        assert all(row['equal'] for row in result['rows'])
        assert result['ckw']['violated'] == 1.0
        assert result['computed']['total_trace_norm'] == pytest.approx(2.0, abs=1e-9)


def test_random_audit_is_deterministic(capsys):
    args = ('random-audit', '--samples', '3', '--seed', '5', '--nu', '2', '3')
    code, first, _ = run(capsys, *args)
    assert code == 0
    _, second, _ = run(capsys, *args)
    assert first == second
    summary = json.loads(first)
    assert summary['samples'] == 3
    assert summary['verdict_counts'][Verdict.VIOLATED.value] == 0
    assert summary['violating_samples'] == []


def test_croof(capsys):
    code, out, _ = run(capsys, 'croof', '--state', 'ou', '--keep', '0', '1', '--restarts', '2')
    assert code == 0
    result = json.loads(out)
    assert result['value'] <= 1.001
    assert result['lower'] == pytest.approx(2 / 3, abs=1e-12)
    assert result['keep'] == [0, 1]


@pytest.mark.parametrize("args", [
    ('measure', '--state', 'no-such-state'),
    ('measure', '--state', 'missing.json'),
])
def test_bad_state_input_exits_two(capsys, args):
    code, _, err = run(capsys, *args)
    assert code == 2
    assert 'ERROR' in err


def test_ragged_state_file_exits_two(capsys, tmp_path):
    path = tmp_path / "ragged.json"
    path.write_text(json.dumps({'dims': [2, 2], 'amplitudes': [[1, 0], [0]]}))
    code, _, err = run(capsys, 'measure', '--state', str(path))
    assert code == 2
    assert 'malformed' in err


@pytest.mark.parametrize("args", [
    ('measure', '--state', 'w3', '--partition', '0:0'),
    ('audit', '--state', 'w3', '--nu-min', '1'),
    ('croof', '--state', 'ou'),
    ('audit', '--state', 'ou', '--measure', 'concurrence', '--nu', '2'),
])
def test_invalid_requests_exit_three(capsys, args):
    code, _, _ = run(capsys, *args)
    assert code == 3


def test_certain_violation_exits_four(capsys, monkeypatch):
    report = audit(w_state(3), nu_grid=(2.0,), label='w3')
    report.results[0].rows[0].verdict = Verdict.VIOLATED.value
    monkeypatch.setattr(cli.commands, 'audit', lambda *args, **kwargs: report)
    code, _, err = run(capsys, 'audit', '--state', 'w3', '--nu', '2')
    assert code == 4
    assert 'VIOLATED w3' in err


def test_figure_bound_above_the_lhs_exits_four(capsys, monkeypatch):
    data = build_figure('fig2', nu_grid=(2.0,))
    data.rows[0].sum_bound = 1.0
    monkeypatch.setattr(cli.commands, 'build_figure', lambda *args, **kwargs: data)
    code, _, err = run(capsys, 'figure', 'fig2', '--nu', '2')
    assert code == 4
    assert 'VIOLATED fig2 nu=2 sum_bound' in err


def test_failing_counterexample_exits_four(capsys, monkeypatch):
    # epsilon 3 instead of 2 pushes the product bound to 5 > 4 at nu = 2
    monkeypatch.setattr(cli.commands, 'COUNTEREXAMPLES', (CounterexampleCase('ou', 4.0, 1.0, 1.0, 3.0),))
    code, out, err = run(capsys, 'counterexamples', '--nu', '2', '--restarts', '1')
    assert code == 4
    assert json.loads(out)[0]['holds'] is False
    assert 'VIOLATED ou nu=2' in err
