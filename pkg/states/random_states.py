"""
Seeded random states.

Every draw is addressed by (seed, index): the generator for draw `index`
is seeded from a SeedSequence spawned at that index, so batches reproduce
exactly whatever order or worker the draws run on.
"""

from typing import Sequence

import numpy as np

from models.errors import StateValidationError
from models.quantum_state import DensityOperator, PureState
from models.register import DimVector


def draw_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for draw `index` under `seed`."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_random_pure(dims: Sequence[int], seed: int, index: int = 0) -> PureState:
    """Haar-random pure state: a normalized complex Gaussian vector."""
    dims = DimVector.of(dims)
    rng = draw_rng(seed, index)
    return PureState.from_unnormalized(dims, _complex_gaussian(rng, dims.total_dim))


def random_mixed(dims: Sequence[int], rank: int, seed: int, index: int = 0) -> DensityOperator:
    """
    Random density operator of the given rank.

    G G^dagger / Tr for a D x rank complex Gaussian G, which is the reduced
    state of a Haar-random purification with a rank-dimensional ancilla.

    Raises:
        StateValidationError: Unless 1 <= rank <= total_dim
    """
    dims = DimVector.of(dims)
    if not 1 <= rank <= dims.total_dim:
        raise StateValidationError(f"rank must lie in [1, {dims.total_dim}], got {rank}")
    rng = draw_rng(seed, index)
    gaussian = _complex_gaussian(rng, (dims.total_dim, rank))
    matrix = gaussian @ gaussian.conj().T
    matrix = (matrix + matrix.conj().T) / 2
    return DensityOperator(dims, matrix / np.real(np.trace(matrix)))


def schmidt_rank_two_pure(dims_a: Sequence[int], dims_b: Sequence[int], seed: int, index: int = 0) -> PureState:
    """
    Random pure state with exactly two Schmidt terms across side A | side B.

    Side A occupies the leading subsystems of the returned register.
    """
    dims_a, dims_b = DimVector.of(dims_a), DimVector.of(dims_b)
    rng = draw_rng(seed, index)
    left, _ = np.linalg.qr(_complex_gaussian(rng, (dims_a.total_dim, 2)))
    right, _ = np.linalg.qr(_complex_gaussian(rng, (dims_b.total_dim, 2)))
    weight = rng.uniform(0.05, 0.95)
    coefficients = np.sqrt([weight, 1.0 - weight])
    vector = sum(coefficients[k] * np.kron(left[:, k], right[:, k]) for k in range(2))
    return PureState.from_unnormalized(DimVector(dims_a.dims + dims_b.dims), vector)
