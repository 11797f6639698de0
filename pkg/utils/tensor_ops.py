"""
Linear-algebra primitives on multi-qudit registers.

Tensor products, partial traces, partial transposes, Schmidt
decompositions, trace norms and Hermitian spectra. Every function is pure:
inputs are never modified and results are fresh objects.
"""

import string
from typing import Iterable, Sequence, Tuple

import numpy as np
import scipy.linalg

from models.errors import PartitionError, StateValidationError
from models.quantum_state import AnyState, DensityOperator, PureState, SchmidtDecomposition
from models.register import DimVector, Partition

EIGEN_HERMITIAN_TOLERANCE = 1e-10
SCHMIDT_CUTOFF = 1e-12

_LETTERS = string.ascii_letters


def tensor_product(*states: AnyState) -> AnyState:
    """
    Tensor product of states, in argument order.

    Pure states combine into a PureState; if any factor is a
    DensityOperator the result is a DensityOperator.

    Args:
        *states (AnyState): At least one state

    Returns:
        AnyState: Product state over the concatenated register
    """
    if not states:
        raise ValueError("tensor_product needs at least one state")
    dims = tuple(d for state in states for d in state.dims)
    if all(isinstance(state, PureState) for state in states):
        vector = states[0].amplitudes
        for state in states[1:]:
            vector = np.kron(vector, state.amplitudes)
        return PureState(DimVector(dims), vector)
    matrix = np.ones((1, 1), dtype=np.complex128)
    for state in states:
        factor = to_density(state).matrix if isinstance(state, PureState) else state.matrix
        matrix = np.kron(matrix, factor)
    return DensityOperator(DimVector(dims), matrix)


def to_density(psi: PureState) -> DensityOperator:
    """Rank-1 projector |psi><psi| over the same register."""
    vector = psi.amplitudes
    return DensityOperator(psi.dims, np.outer(vector, vector.conj()))


def as_density(state: AnyState) -> DensityOperator:
    return to_density(state) if isinstance(state, PureState) else state


def _trace_subscripts(n_subsystems: int, keep: Sequence[int]) -> str:
    row = _LETTERS[:n_subsystems]
    col = [_LETTERS[n_subsystems + k] if k in keep else row[k] for k in range(n_subsystems)]
    out = ''.join(row[k] for k in keep) + ''.join(col[k] for k in keep)
    return f"{row}{''.join(col)}->{out}"


def partial_trace(rho: AnyState, keep: Iterable[int]) -> DensityOperator:
    """
    Trace out every subsystem not listed in `keep`.

    The contraction is an explicit multi-index einsum, so non-contiguous
    index sets need no reordering. Kept subsystems stay in register order.

    Args:
        rho (AnyState): Density operator (a PureState is promoted)
        keep (Iterable[int]): Subsystems to keep

    Returns:
        DensityOperator: Reduced state over the kept subsystems

    Raises:
        PartitionError: If `keep` is empty, has duplicates or is out of range
    """
    if isinstance(rho, PureState):
        return partial_trace_pure(rho, keep)
    keep = rho.dims.check_indices(keep)
    n = rho.n_subsystems
    if len(keep) == n:
        return rho
    tensor = rho.matrix.reshape(rho.dims.dims * 2)
    reduced = np.einsum(_trace_subscripts(n, keep), tensor)
    kept_dims = rho.dims.subset(keep)
    size = kept_dims.total_dim
    matrix = reduced.reshape(size, size)
    return DensityOperator(kept_dims, (matrix + matrix.conj().T) / 2)


def partial_trace_pure(psi: PureState, keep: Iterable[int]) -> DensityOperator:
    """Reduced state of a pure state, contracting the amplitude tensor with its conjugate."""
    keep = psi.dims.check_indices(keep)
    n = psi.n_subsystems
    row = _LETTERS[:n]
    col = ''.join(_LETTERS[n + k] if k in keep else row[k] for k in range(n))
    out = ''.join(row[k] for k in keep) + ''.join(col[k] for k in keep)
    tensor = psi.tensor()
    reduced = np.einsum(f"{row},{col}->{out}", tensor, tensor.conj())
    kept_dims = psi.dims.subset(keep)
    size = kept_dims.total_dim
    matrix = reduced.reshape(size, size)
    return DensityOperator(kept_dims, (matrix + matrix.conj().T) / 2)


def partial_transpose(rho: AnyState, subset: Iterable[int]) -> np.ndarray:
    """
    Transpose the row and column indices of the subsystems in `subset`.

    Args:
        rho (AnyState): Density operator (a PureState is promoted)
        subset (Iterable[int]): Subsystems to transpose; may be empty

    Returns:
        np.ndarray: Hermitian matrix with unit trace, not necessarily PSD

    Raises:
        PartitionError: On out-of-range or duplicate indices
    """
    rho = as_density(rho)
    subset = rho.dims.check_indices(subset, allow_empty=True)
    n = rho.n_subsystems
    axes = list(range(2 * n))
    for k in subset:
        axes[k], axes[n + k] = axes[n + k], axes[k]
    size = rho.dims.total_dim
    tensor = rho.matrix.reshape(rho.dims.dims * 2)
    return np.ascontiguousarray(tensor.transpose(axes)).reshape(size, size)


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of singular values of a square matrix."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise StateValidationError(f"trace norm needs a square matrix, got shape {matrix.shape}")
    return float(np.sum(scipy.linalg.svdvals(matrix)))


def hermitian_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """
    Real spectrum of a Hermitian matrix, in descending order.

    Raises:
        StateValidationError: If the matrix deviates from Hermitian by more than 1e-10
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise StateValidationError(f"expected a square matrix, got shape {matrix.shape}")
    deviation = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    if deviation > EIGEN_HERMITIAN_TOLERANCE:
        raise StateValidationError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
    return scipy.linalg.eigh(matrix, eigvals_only=True)[::-1]


def bipartite_matrix(psi: PureState, partition: Partition) -> Tuple[np.ndarray, DimVector, DimVector]:
    """
    Reshape amplitudes into a (dim A) x (dim B) matrix.

    Args:
        psi (PureState): State over a register covered by `partition`
        partition (Partition): Bipartition of the register

    Returns:
        Tuple[np.ndarray, DimVector, DimVector]: Amplitude matrix, side-A dims, side-B dims
    """
    partition.require_cover(psi.dims)
    order = list(partition.side_a) + list(partition.side_b)
    dims_a = psi.dims.subset(partition.side_a)
    dims_b = psi.dims.subset(partition.side_b)
    matrix = psi.tensor().transpose(order).reshape(dims_a.total_dim, dims_b.total_dim)
    return matrix, dims_a, dims_b


def schmidt(psi: PureState, partition: Partition) -> SchmidtDecomposition:
    """
    Schmidt decomposition of a pure state across a covering bipartition.

    Coefficients are the squared Schmidt values (eigenvalues of the reduced
    state), so a Bell state yields (1/2, 1/2).

    Raises:
        PartitionError: If the partition does not cover the register
    """
    matrix, _, _ = bipartite_matrix(psi, partition)
    left, singular, right_h = np.linalg.svd(matrix, full_matrices=False)
    keep = singular > SCHMIDT_CUTOFF
    if not np.any(keep):
        keep[0] = True
    coefficients = singular[keep] ** 2
    coefficients.setflags(write=False)
    return SchmidtDecomposition(
        partition=partition,
        coefficients=coefficients,
        left_vectors=left[:, keep],
        right_vectors=right_h[keep, :].T,
    )


def schmidt_reconstruction(decomposition: SchmidtDecomposition, dims: DimVector) -> np.ndarray:
    """Amplitudes rebuilt from a Schmidt decomposition, back in register order."""
    partition = decomposition.partition
    order = list(partition.side_a) + list(partition.side_b)
    shape = [dims[k] for k in order]
    tensor = decomposition.bipartite_vector().reshape(shape)
    return tensor.transpose(np.argsort(order)).reshape(-1)


def reduce_to(state: AnyState, partition: Partition) -> Tuple[AnyState, Partition]:
    """
    Restrict a state to the subsystems a partition mentions.

    If the partition already covers the register, the state is returned
    unchanged. Otherwise the other subsystems are traced out and the
    partition is re-indexed onto the reduced register.

    Raises:
        PartitionError: If the partition reaches outside the register
    """
    partition.require_within(state.dims)
    if partition.covers(state.n_subsystems):
        return state, partition
    return partial_trace(state, partition.indices), partition.localized()
