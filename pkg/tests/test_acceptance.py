"""
End-to-end checks of the worked examples, the counterexamples and the
random campaigns. Full-size campaigns carry the `slow` marker; the
unmarked versions run the same checks on smaller samples.
"""

import math

import numpy as np
import pytest

from config.config_manager import RoofConfig
from entanglement.convex_roof import RoofObjective, roof_upper_bound
from entanglement.measures import (
    concurrence_pure,
    negativity,
    residual_epsilon,
    residual_kappa,
    tilde_overlap,
    wootters_concurrence,
)
from models.measure_value import MeasureKind
from models.quantum_state import PureState
from models.register import DimVector, Partition
from monogamy.audit import Verdict, audit
from monogamy.bounds import BoundId, counterexample_bound, evaluate, kappa_half_terms, nu_range
from monogamy.figures import build_figure
from states.catalog import EXAMPLE1_PARAMETERS, example1_quoted_values, example1_state
from states.random_states import draw_rng, haar_random_pure, random_mixed
from utils.tensor_ops import partial_trace

SPLIT = Partition((0,), (1, 2))
CAMPAIGN_NU = (2.0, 2.5, 3.0, 5.0, 10.0)
PAIR = Partition((0,), (1,))


def test_generalized_schmidt_example(gsd):
    residual = residual_epsilon(gsd)
    assert residual.total.value == pytest.approx(4 / 5, abs=1e-10)
    assert residual.first_pair.value == pytest.approx(2 / 5, abs=1e-10)
    assert residual.remainder.value == pytest.approx(2 * math.sqrt(2) / 5, abs=1e-10)
    assert residual.value == pytest.approx(4 / 25, abs=1e-10)

    data = build_figure('fig2', nu_grid=(2.0,))
    row = data.rows[0]
    assert row.lhs == pytest.approx(0.64, abs=1e-9)
    assert row.lemma_bound == pytest.approx(math.sqrt(0.384), abs=1e-9)
    assert row.zhang2021_bound == pytest.approx(0.48, abs=1e-9)
    assert row.sum_bound == pytest.approx(0.48, abs=1e-9)
    assert data.ordering_holds


@pytest.mark.parametrize("state_name", ['ou', 'kim_sanders'])
def test_counterexamples_saturate_the_lemma_form(state_name, request):
    psi = request.getfixturevalue(state_name)
    assert negativity(psi, SPLIT).value == pytest.approx(2.0, abs=1e-9)
    quoted = {'ou': (1.0, 1.0, 2.0), 'kim_sanders': (8 / 9, 8 / 9, 20 / 9)}[state_name]
    for nu in (2.0, 3.0, 4.0, 10.0):
        assert counterexample_bound(*quoted, nu) == pytest.approx(2.0 ** nu, rel=1e-12)


def test_w_state_equality_over_the_default_grid(w3):
    assert residual_kappa(w3).value == pytest.approx(0.0, abs=1e-10)
    report = audit(w3, nu_grid=nu_range(), label='w3')
    for result in report.results:
        lemma = next(row for row in result.rows if row.bound_id == BoundId.LEMMA1_C.value)
        assert lemma.rhs_estimate == pytest.approx(result.lhs, abs=1e-9)
    assert report.all_hold


def _soundness_campaign(samples: int):
    for kind in MeasureKind:
        for index in range(samples):
            psi = haar_random_pure((2, 2, 2), seed=2024, index=index)
            report = audit(psi, measure_kind=kind, nu_grid=CAMPAIGN_NU, label=f"sample-{index}")
            for result in report.results:
                for row in result.rows:
                    assert row.rhs_estimate <= row.lhs * (1 + 1e-8) + 1e-12, (index, row)
                if result.dominance_holds is not None:
                    assert result.dominance_holds, (index, result.nu)
            assert not report.violations()


def test_soundness_on_random_states():
    _soundness_campaign(100)


@pytest.mark.slow
def test_soundness_on_random_states_full():
    _soundness_campaign(10_000)


def _dominance_on_triples(count: int):
    rng = draw_rng(77)
    first = rng.uniform(0.0, 1.0, count)
    second = rng.uniform(0.0, 1.0, count)
    residual = rng.uniform(0.0, 2.0, count)
    for nu in CAMPAIGN_NU:
        for lemma_id, prod_id in ((BoundId.LEMMA1_C, BoundId.PROD2021_C), (BoundId.LEMMA3_N, BoundId.PROD2021_N)):
            lemma = evaluate(lemma_id, nu, first, second, [second], residual)
            prod = evaluate(prod_id, nu, first, second, [second], residual)
            assert np.all(lemma >= prod * (1 - 1e-12))


def test_dominance_on_random_ingredients():
    _dominance_on_triples(10_000)


def _identity_campaign(samples: int):
    for index in range(samples):
        psi = haar_random_pure((2, 2, 2), seed=31, index=index)
        total = concurrence_pure(psi, SPLIT).value
        overlaps = tilde_overlap(partial_trace(psi, [0, 1])) + tilde_overlap(partial_trace(psi, [0, 2]))
        assert abs(total ** 2 - overlaps) < 1e-8
        kappa = residual_kappa(psi)
        assert abs(kappa.value - kappa.cross_check) < 1e-8


def test_proof_identities():
    _identity_campaign(200)


@pytest.mark.slow
def test_proof_identities_full():
    _identity_campaign(1000)


def _roof_oracle(samples: int, config: RoofConfig):
    for index in range(samples):
        rank = 2 + index % 3
        rho = random_mixed((2, 2), rank=rank, seed=404, index=index)
        exact = wootters_concurrence(rho).value
        bound = roof_upper_bound(rho, PAIR, RoofObjective.NEGATIVITY, config).value
        assert exact - 1e-9 <= bound <= exact + 1e-3, (index, exact, bound)


def test_convex_roof_oracle():
    _roof_oracle(6, RoofConfig(restarts=6))


@pytest.mark.slow
def test_convex_roof_oracle_full(ou):
    _roof_oracle(200, RoofConfig())
    value = roof_upper_bound(partial_trace(ou, [0, 1]), PAIR, RoofObjective.NEGATIVITY, RoofConfig())
    assert value.value <= 1.001


def _embedded_reports(samples: int, config: RoofConfig):
    ancilla = PureState.basis((2,), (0,))
    for index in range(samples):
        psi = haar_random_pure((2, 2, 2), seed=8, index=index)
        embedded = PureState.from_unnormalized(DimVector((2, 2, 2, 2)),
                                               np.kron(psi.amplitudes, ancilla.amplitudes))
        report = audit(embedded, nu_grid=(2.0, 3.0, 5.0), roof_config=config, label=f"embedded-{index}")
        yield residual_kappa(psi), report


def _row(result, bound_id: BoundId):
    return next(r for r in result.rows if r.bound_id == bound_id.value)


def _embedded_campaign(samples: int, config: RoofConfig):
    for three, report in _embedded_reports(samples, config):
        for result in report.results:
            # the appended qubit's zero pairwise term sends the geometric mean to 0
            expected = kappa_half_terms(three.first_pair.value ** 2, 0.0, three.value, result.nu)
            assert _row(result, BoundId.THEOREM1_C).rhs_high == pytest.approx(expected, abs=1e-9)
        assert {row.verdict for row in report.rows()} == {Verdict.HOLDS.value}


def _embedded_sum_campaign(samples: int, config: RoofConfig):
    for three, report in _embedded_reports(samples, config):
        for result in report.results:
            expected = kappa_half_terms(three.first_pair.value ** 2, three.remainder.value ** 2,
                                        three.value, result.nu)
            assert _row(result, BoundId.THEOREM1_SUM_C).rhs_high == pytest.approx(expected, abs=1e-9)


def test_appended_qubit_reduces_to_three_parties(small_roof):
    _embedded_campaign(3, small_roof)


def test_appended_qubit_sum_variant_reproduces_three_party_bound(small_roof):
    _embedded_sum_campaign(3, small_roof)


@pytest.mark.slow
def test_appended_qubit_reduces_to_three_parties_full():
    _embedded_campaign(500, RoofConfig())
    _embedded_sum_campaign(500, RoofConfig())


def test_first_example_discrepancy_report():
    quoted = example1_quoted_values()
    verbatim = build_figure('fig1', quoted_values=True, nu_grid=(2.0,))
    assert verbatim.source == 'quoted-values'
    assert verbatim.ingredients['total'] ** 2 == pytest.approx(quoted.c_a_bc_sq, rel=1e-15)
    assert verbatim.ingredients['first'] == quoted.c_ab
    assert verbatim.ingredients['second'] == quoted.c_ac
    assert verbatim.ingredients['residual'] == quoted.kappa

    derived = build_figure('fig1')
    assert derived.source == 'state'
    flagged = {item.quantity: item for item in derived.mismatches}
    assert flagged['c_a_bc_sq'].state_value == pytest.approx(384 / 625, abs=1e-10)
    assert flagged['c_a_bc_sq'].quoted_value == pytest.approx(48 / 625)
    assert 'c_ab' not in flagged
    assert concurrence_pure(example1_state(*EXAMPLE1_PARAMETERS), SPLIT).value ** 2 == pytest.approx(
        384 / 625, abs=1e-10)
    assert len(derived.rows) == len(nu_range())
    assert derived.ordering_holds
    assert verbatim.ordering_holds
