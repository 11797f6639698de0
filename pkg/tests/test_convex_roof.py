import math

import numpy as np
import pytest

from config.config_manager import RoofConfig
from entanglement.convex_roof import (
    ConvexRoofOptimizer,
    RoofObjective,
    negativity_lower_bound,
    pure_measure_from_singular_values,
    roof_upper_bound,
)
from entanglement.measures import wootters_concurrence
from models.errors import NumericalConsistencyError, OptimizerError
from models.measure_value import MeasureMethod
from models.register import Partition
from states.random_states import random_mixed
from utils.tensor_ops import partial_trace, to_density

PAIR = Partition((0,), (1,))


def test_pure_measure_from_singular_values():
    bell = np.array([1, 1]) / math.sqrt(2)
    assert pure_measure_from_singular_values(bell, RoofObjective.NEGATIVITY) == pytest.approx(1.0)
    assert pure_measure_from_singular_values(bell, RoofObjective.CONCURRENCE) == pytest.approx(1.0)
    flat = np.full(3, 1 / math.sqrt(3))
    assert pure_measure_from_singular_values(flat, RoofObjective.NEGATIVITY) == pytest.approx(2.0)
    assert pure_measure_from_singular_values(flat, RoofObjective.CONCURRENCE) == pytest.approx(math.sqrt(4 / 3))
    batch = np.array([[1.0, 0.0], [math.sqrt(0.5), math.sqrt(0.5)]])
    np.testing.assert_allclose(pure_measure_from_singular_values(batch, RoofObjective.NEGATIVITY), [0.0, 1.0])


def test_rank_one_input_is_exact(bell):
    value = roof_upper_bound(to_density(bell), PAIR)
    assert value.value == pytest.approx(1.0, abs=1e-12)
    assert value.is_exact
    assert value.method is MeasureMethod.CONVEX_ROOF_UPPER


@pytest.mark.parametrize("index", range(3))
def test_two_qubit_roof_brackets_wootters(index):
    rho = random_mixed((2, 2), rank=2, seed=17, index=index)
    config = RoofConfig(restarts=6, max_iterations=2000, seed=index)
    exact = wootters_concurrence(rho).value
    for objective in RoofObjective:
        bound = roof_upper_bound(rho, PAIR, objective, config)
        assert bound.value >= exact - 1e-9
        assert bound.value <= exact + 1e-3
        assert bound.lower <= exact + 1e-9


def test_ou_pair_roof_is_one(ou, small_roof):
    rho_ab = partial_trace(ou, [0, 1])
    value = roof_upper_bound(rho_ab, PAIR, RoofObjective.NEGATIVITY, small_roof)
    assert 1.0 - 1e-9 <= value.value <= 1.001
    assert value.lower == pytest.approx(2 / 3, abs=1e-12)
    assert negativity_lower_bound(rho_ab, PAIR) == pytest.approx(2 / 3, abs=1e-12)


def test_external_lower_bound_raises_the_floor(ou, small_roof):
    rho_ab = partial_trace(ou, [0, 1])
    value = roof_upper_bound(rho_ab, PAIR, RoofObjective.NEGATIVITY, small_roof, lower_bound=0.9)
    assert value.lower == pytest.approx(0.9)
    concurrence = roof_upper_bound(rho_ab, PAIR, RoofObjective.CONCURRENCE, small_roof)
    # concurrence has no negativity floor of its own
    assert concurrence.lower == 0.0


def test_upper_bound_below_its_floor_is_an_error(ou, small_roof):
    rho_ab = partial_trace(ou, [0, 1])
    # the roof of this reduction is 1, well under the claimed floor
    with pytest.raises(NumericalConsistencyError):
        roof_upper_bound(rho_ab, PAIR, RoofObjective.NEGATIVITY, small_roof, lower_bound=1.5)


def test_optimizer_reconstructs_the_state(small_roof):
    rho = random_mixed((2, 3), rank=3, seed=2)
    optimizer = ConvexRoofOptimizer(rho, PAIR, RoofObjective.NEGATIVITY, small_roof)
    assert optimizer.rank == 3
    assert optimizer.ensemble_size == 9
    result = optimizer.optimize()
    np.testing.assert_allclose(result.point.reconstruct(), rho.matrix, atol=1e-8)
    assert result.point.probabilities.sum() == pytest.approx(1.0, abs=1e-10)
    assert len(result.restart_values) == small_roof.restarts
    assert all(b >= a for a, b in zip(result.running_best[1:], result.running_best[:-1]))
    assert result.best_value == min(result.restart_values)
    assert result.restart_values[result.best_restart] == result.best_value
    assert result.best_value >= negativity_lower_bound(rho, PAIR) - 1e-9


def test_optimizer_is_deterministic():
    rho = random_mixed((2, 3), rank=2, seed=8)
    config = RoofConfig(restarts=3, max_iterations=300, seed=42)
    first = ConvexRoofOptimizer(rho, PAIR, RoofObjective.NEGATIVITY, config).optimize()
    second = ConvexRoofOptimizer(rho, PAIR, RoofObjective.NEGATIVITY, config).optimize()
    assert first.restart_values == second.restart_values
    threaded = RoofConfig(restarts=3, max_iterations=300, seed=42, workers=2)
    parallel = ConvexRoofOptimizer(rho, PAIR, RoofObjective.NEGATIVITY, threaded).optimize()
    assert parallel.restart_values == first.restart_values
    assert parallel.best_restart == first.best_restart


def test_initial_isometries(small_roof):
    rho = random_mixed((2, 2), rank=2, seed=3)
    optimizer = ConvexRoofOptimizer(rho, PAIR, RoofObjective.NEGATIVITY, small_roof)
    np.testing.assert_allclose(optimizer.initial_isometry(0), np.eye(4, 2))
    for index in (1, 2):
        isometry = optimizer.initial_isometry(index)
        np.testing.assert_allclose(isometry.conj().T @ isometry, np.eye(2), atol=1e-12)
    assert not np.allclose(optimizer.initial_isometry(1), optimizer.initial_isometry(2))


def test_broken_decomposition_raises(small_roof):
    rho = random_mixed((2, 2), rank=2, seed=3)
    optimizer = ConvexRoofOptimizer(rho, PAIR, RoofObjective.NEGATIVITY, small_roof)
    with pytest.raises(OptimizerError):
        optimizer.check_reconstruction(2.0 * optimizer.initial_isometry(0))


def test_ensemble_size_below_rank_is_rejected():
    rho = random_mixed((2, 2), rank=3, seed=3)
    with pytest.raises(ValueError):
        ConvexRoofOptimizer(rho, PAIR, RoofObjective.NEGATIVITY, RoofConfig(ensemble_size=2))
