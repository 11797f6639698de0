"""
Models package for the monogamy audit toolkit.

This package contains the core value types:
- DimVector, Partition: register structure and bipartitions
- PureState, DensityOperator, SchmidtDecomposition: quantum states
- MeasureValue, Interval, ResidualEntanglement: measure results
- errors: the exception hierarchy
"""

from .errors import (
    BoundEvaluationError,
    EntanglementError,
    NumericalConsistencyError,
    OptimizerError,
    PartitionError,
    StateInputError,
    StateValidationError,
)
from .measure_value import Interval, MeasureKind, MeasureMethod, MeasureValue, ResidualEntanglement
from .quantum_state import DensityOperator, PureState, SchmidtDecomposition, load_state, save_state, state_from_dict
from .register import DimVector, Partition

__all__ = [
    'DimVector', 'Partition',
    'PureState', 'DensityOperator', 'SchmidtDecomposition', 'load_state', 'save_state', 'state_from_dict',
    'MeasureValue', 'MeasureKind', 'MeasureMethod', 'Interval', 'ResidualEntanglement',
    'EntanglementError', 'StateValidationError', 'PartitionError', 'StateInputError',
    'OptimizerError', 'NumericalConsistencyError', 'BoundEvaluationError',
]
