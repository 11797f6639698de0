import math

import numpy as np
import pytest

from models.errors import PartitionError, StateValidationError
from models.quantum_state import DensityOperator, PureState
from models.register import DimVector, Partition
from states.random_states import haar_random_pure, random_mixed
from utils.tensor_ops import (
    as_density,
    hermitian_eigenvalues,
    partial_trace,
    partial_transpose,
    reduce_to,
    schmidt,
    schmidt_reconstruction,
    tensor_product,
    to_density,
    trace_norm,
)


def test_bell_partial_trace_is_maximally_mixed(bell):
    for keep in ([0], [1]):
        reduced = partial_trace(bell, keep)
        np.testing.assert_allclose(reduced.matrix, np.eye(2) / 2, atol=1e-15)


def test_ghz_non_contiguous_partial_trace(ghz3):
    reduced = partial_trace(ghz3, [0, 2])
    np.testing.assert_allclose(reduced.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    assert reduced.dims.dims == (2, 2)


def test_partial_trace_matches_explicit_contraction():
    psi = haar_random_pure((2, 3, 2), seed=3)
    tensor = psi.tensor()
    expected = np.einsum('abc,dbf->acdf', tensor, tensor.conj()).reshape(4, 4)
    np.testing.assert_allclose(partial_trace(psi, [0, 2]).matrix, expected, atol=1e-14)
    # the density-matrix route agrees with the pure-state route
    np.testing.assert_allclose(partial_trace(to_density(psi), [0, 2]).matrix, expected, atol=1e-14)


def test_partial_trace_of_mixed_state_keeps_trace():
    rho = random_mixed((2, 2, 3), rank=3, seed=1)
    reduced = partial_trace(rho, [1, 2])
    assert np.trace(reduced.matrix).real == pytest.approx(1.0, abs=1e-12)
    assert partial_trace(rho, [0, 1, 2]) is rho


@pytest.mark.parametrize("keep", [[], [0, 0], [3]])
def test_partial_trace_rejects_bad_index_sets(ghz3, keep):
    with pytest.raises(PartitionError):
        partial_trace(ghz3, keep)


def test_bell_partial_transpose_spectrum(bell):
    transposed = partial_transpose(bell, [0])
    np.testing.assert_allclose(hermitian_eigenvalues(transposed), [0.5, 0.5, 0.5, -0.5], atol=1e-15)
    assert trace_norm(transposed) == pytest.approx(2.0, abs=1e-14)
    assert np.trace(transposed).real == pytest.approx(1.0)


def test_partial_transpose_of_every_subsystem_is_full_transpose():
    rho = random_mixed((2, 3), rank=2, seed=4)
    np.testing.assert_allclose(partial_transpose(rho, [0, 1]), rho.matrix.T, atol=0)
    np.testing.assert_allclose(partial_transpose(rho, []), rho.matrix, atol=0)


@pytest.mark.parametrize("subset", [[2], [-1], [0, 0]])
def test_partial_transpose_rejects_bad_subsets(bell, subset):
    with pytest.raises(PartitionError):
        partial_transpose(bell, subset)


def test_partial_transpose_sides_share_spectrum():
    rho = random_mixed((2, 2), rank=2, seed=9)
    left = hermitian_eigenvalues(partial_transpose(rho, [0]))
    right = hermitian_eigenvalues(partial_transpose(rho, [1]))
    np.testing.assert_allclose(left, right, atol=1e-14)


def test_w_state_schmidt(w3, split_a):
    decomposition = schmidt(w3, split_a)
    np.testing.assert_allclose(decomposition.coefficients, [2 / 3, 1 / 3], atol=1e-14)
    rebuilt = schmidt_reconstruction(decomposition, w3.dims)
    np.testing.assert_allclose(rebuilt, w3.amplitudes, atol=1e-14)


def test_ou_schmidt_is_flat(ou):
    decomposition = schmidt(ou, Partition((0,), (1, 2)))
    np.testing.assert_allclose(decomposition.coefficients, [1 / 3] * 3, atol=1e-14)


def test_schmidt_reconstruction_for_non_contiguous_partition():
    psi = haar_random_pure((2, 3, 2), seed=11)
    decomposition = schmidt(psi, Partition((1,), (0, 2)))
    assert decomposition.rank == 3
    assert decomposition.coefficients.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(schmidt_reconstruction(decomposition, psi.dims), psi.amplitudes, atol=1e-13)


def test_schmidt_of_product_state_has_rank_one():
    psi = PureState.basis((2, 2, 2), (0, 1, 0))
    assert schmidt(psi, Partition((0,), (1, 2))).rank == 1


def test_schmidt_needs_a_covering_partition(w3):
    with pytest.raises(PartitionError):
        schmidt(w3, Partition((0,), (1,)))


def test_tensor_product(bell):
    zero = PureState.basis((2,), (0,))
    product = tensor_product(bell, zero)
    assert isinstance(product, PureState)
    assert product.dims.dims == (2, 2, 2)
    assert product.amplitudes[0] == pytest.approx(1 / math.sqrt(2))
    assert product.amplitudes[6] == pytest.approx(1 / math.sqrt(2))
    mixed = tensor_product(zero, DensityOperator(DimVector((2,)), np.eye(2) / 2))
    assert isinstance(mixed, DensityOperator)
    np.testing.assert_allclose(mixed.matrix, np.diag([0.5, 0.5, 0, 0]))
    with pytest.raises(ValueError):
        tensor_product()


def test_as_density_promotes_pure_states(bell):
    rho = as_density(bell)
    assert rho.rank() == 1
    assert as_density(rho) is rho


def test_trace_norm_and_spectrum_errors():
    with pytest.raises(StateValidationError):
        trace_norm(np.ones((2, 3)))
    with pytest.raises(StateValidationError):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)


def test_reduce_to(w3):
    reduced, local = reduce_to(w3, Partition((0,), (2,)))
    assert reduced.dims.dims == (2, 2)
    assert (local.side_a, local.side_b) == ((0,), (1,))
    same, partition = reduce_to(w3, Partition((0,), (1, 2)))
    assert same is w3
    with pytest.raises(PartitionError):
        reduce_to(w3, Partition((0,), (5,)))
