import math

import pytest

from models.errors import StateValidationError
from models.measure_value import MeasureKind
from monogamy.audit import Verdict, audit, ckw_comparison, classify
from monogamy.report import parse_csv, report_from_json, report_to_csv, report_to_json, write_report
from states.catalog import w_state
from states.random_states import random_mixed
from utils.tensor_ops import to_density


def rows_by_id(result):
    return {row.bound_id: row for row in result.rows}


def test_w_state_saturates_the_lemma_form(w3):
    report = audit(w3, nu_grid=(2.0, 3.0, 5.0), label="w3")
    assert report.all_hold
    assert report.ingredients.exact
    for result in report.results:
        rows = rows_by_id(result)
        lemma = rows['lemma1_C']
        assert abs(lemma.margin) <= 1e-9 * lemma.lhs
        assert result.tightest == 'lemma1_C'
        assert result.dominance_holds
    assert [row.bound_id for row in report.results[0].rows][0] == 'lemma1_C'
    assert 'prod2020_C' in rows_by_id(report.results[0])
    assert 'prod2020_C' not in rows_by_id(report.results[1])


def test_gsd_cren_rows(gsd):
    report = audit(gsd, measure_kind=MeasureKind.CREN, nu_grid=(2.0, 4.0), label="gsd")
    at_two = rows_by_id(report.results[0])
    assert report.results[0].lhs == pytest.approx(0.64, abs=1e-12)
    assert at_two['lemma3_N'].rhs_estimate == pytest.approx(math.sqrt(0.384), abs=1e-9)
    assert at_two['prod2021_N'].rhs_estimate == pytest.approx(0.48, abs=1e-9)
    assert at_two['sum_N'].rhs_estimate == pytest.approx(0.48, abs=1e-9)
    assert at_two['theorem2_N'].rhs_estimate == at_two['lemma3_N'].rhs_estimate
    assert report.results[0].tightest == 'lemma3_N'
    at_four = rows_by_id(report.results[1])
    assert at_four['sum_N'].rhs_estimate == pytest.approx(0.128, abs=1e-9)
    assert at_four['prod2021_N'].rhs_estimate == pytest.approx(0.2304, abs=1e-9)
    assert report.verdict_counts()[Verdict.HOLDS.value] == len(list(report.rows()))


def test_ghz_lemma_bound_is_tight(ghz3):
    report = audit(ghz3, nu_grid=(2.0, 6.0))
    for result in report.results:
        assert rows_by_id(result)['lemma1_C'].margin == pytest.approx(0.0, abs=1e-12)
        assert rows_by_id(result)['sum_C'].rhs_estimate == pytest.approx(0.0, abs=1e-12)


def test_ou_cren_audit_with_optimizer(ou, small_roof):
    report = audit(ou, measure_kind=MeasureKind.CREN, nu_grid=(2.0, 3.0), roof_config=small_roof, label="ou")
    assert not report.ingredients.exact
    lower, estimate, upper = report.ingredients.pairwise['1']
    assert lower == pytest.approx(2 / 3, abs=1e-12)
    assert 1.0 - 1e-9 <= estimate <= 1.001
    for result in report.results:
        lemma = rows_by_id(result)['lemma3_N']
        assert lemma.lhs == pytest.approx(2.0 ** result.nu, rel=1e-12)
        assert abs(lemma.margin) <= 1e-2 * lemma.lhs
        assert lemma.verdict == Verdict.HOLDS.value
    assert not report.violations()


def test_report_json_round_trip(w3):
    report = audit(w3, nu_grid=(2.0, 2.5))
    restored = report_from_json(report_to_json(report))
    assert restored == report


def test_report_csv_round_trip(gsd, tmp_path):
    report = audit(gsd, measure_kind=MeasureKind.CREN, nu_grid=(2.0, 3.0), label="gsd")
    parsed = parse_csv(report_to_csv(report))
    rows = list(report.rows())
    assert len(parsed) == len(rows)
    for record, row in zip(parsed, rows):
        assert record['bound_id'] == row.bound_id
        assert record['verdict'] == row.verdict
        assert record['rhs_estimate'] == row.rhs_estimate
        assert record['margin'] == row.margin
    path = write_report(report, tmp_path / "out" / "gsd.csv", fmt='csv')
    assert path.read_text().startswith("label,nu,bound_id,lhs")
    with pytest.raises(ValueError):
        write_report(report, tmp_path / "gsd.xml", fmt='xml')


def test_rank_one_density_is_audited_as_pure(w3):
    report = audit(to_density(w3), nu_grid=(2.0,))
    assert report.all_hold
    assert len(report.results[0].rows) == 6


def test_mixed_states_need_allow_mixed(small_roof):
    rho = random_mixed((2, 2, 2), rank=2, seed=6)
    with pytest.raises(StateValidationError):
        audit(rho, nu_grid=(2.0,))
    report = audit(rho, nu_grid=(2.0, 3.0), allow_mixed=True, roof_config=small_roof)
    assert {row.bound_id for row in report.rows()} == {'sum_C'}
    assert report.ingredients.residual == [0.0, 0.0, 0.0]


def test_audit_scope_errors(bell, ou, w3):
    with pytest.raises(StateValidationError):
        audit(bell)
    with pytest.raises(StateValidationError):
        audit(ou, measure_kind=MeasureKind.CONCURRENCE)
    with pytest.raises(ValueError):
        audit(w3, nu_grid=(1.5,))
    with pytest.raises(StateValidationError):
        audit(w3, b1=0)


def test_four_qubit_audit_has_theorem_rows(small_roof):
    report = audit(w_state(4), nu_grid=(2.0,), roof_config=small_roof)
    ids = {row.bound_id for row in report.rows()}
    assert {'theorem1_C', 'theorem1_sum_C', 'lemma1_C', 'sum_C'} <= ids
    assert set(report.ingredients.pairwise) == {'1', '2', '3'}
    assert not report.violations()


def test_classify():
    assert classify(1.0, 1.0, 0.5, 0.5, 0.5) is Verdict.HOLDS
    assert classify(0.9, 1.0, 0.8, 0.95, 1.1) is Verdict.HOLDS_AT_ESTIMATE
    assert classify(0.9, 1.0, 0.95, 1.05, 1.1) is Verdict.INDETERMINATE
    assert classify(0.9, 1.0, 1.2, 1.3, 1.4) is Verdict.VIOLATED
    assert classify(1.0, 1.0, 1.0, 1.0, 1.0 + 1e-10) is Verdict.HOLDS


def test_ckw_comparison(w3, ou):
    w = ckw_comparison(w3)
    assert w['total_sq'] == pytest.approx(8 / 9)
    assert w['pairwise_sq_sum'] == pytest.approx(8 / 9)
    assert w['violated'] == 0.0
    violated = ckw_comparison(ou, pairwise_values=[1.0, 1.0])
    assert violated['total_sq'] == pytest.approx(4 / 3)
    assert violated['gap'] == pytest.approx(4 / 3 - 2)
    assert violated['violated'] == 1.0
