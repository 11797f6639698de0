"""Shared fixtures for the monogamy audit test suite."""

import math

import numpy as np
import pytest

from config.config_manager import RoofConfig
from models.quantum_state import DensityOperator, PureState
from models.register import DimVector, Partition
from states.catalog import (
    GSD_EXAMPLE2_PARAMETERS,
    ghz_state,
    gsd_state,
    kim_sanders_state,
    ou_state,
    w_state,
)


@pytest.fixture
def bell():
    return PureState(DimVector((2, 2)), np.array([1, 0, 0, 1]) / math.sqrt(2))


@pytest.fixture
def w3():
    return w_state(3)


@pytest.fixture
def ghz3():
    return ghz_state(3)


@pytest.fixture
def gsd():
    return gsd_state(*GSD_EXAMPLE2_PARAMETERS)


@pytest.fixture
def ou():
    return ou_state()


@pytest.fixture
def kim_sanders():
    return kim_sanders_state()


@pytest.fixture
def split_a():
    """Subsystem 0 against two others."""
    return Partition((0,), (1, 2))


@pytest.fixture
def small_roof():
    return RoofConfig(restarts=4, max_iterations=500, seed=7)


@pytest.fixture
def maximally_mixed_qubits():
    return DensityOperator(DimVector((2, 2)), np.eye(4) / 4)
