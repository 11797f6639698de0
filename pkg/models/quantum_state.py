"""
State types: pure state vectors, density operators and Schmidt decompositions.

All state objects validate their invariants on construction and hold
read-only numpy arrays, so they can be shared freely between threads.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np

from .errors import StateInputError, StateValidationError
from .register import DimVector, Partition


def _numerics():
    # config.yaml is only read on first use
    from config import get_config
    return get_config().numerics


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PureState:
    """
    Normalized state vector of a register.

    Attributes:
        dims (DimVector): Register dimensions
        amplitudes (np.ndarray): Complex amplitudes, big-endian composite index
    """
    dims: DimVector
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = DimVector.of(self.dims)
        amplitudes = np.asarray(self.amplitudes)
        if amplitudes.ndim != 1 or amplitudes.shape[0] != dims.total_dim:
            raise StateValidationError(
                f"expected {dims.total_dim} amplitudes for dims {list(dims)}, got shape {amplitudes.shape}"
            )
        if not np.all(np.isfinite(amplitudes)):
            raise StateValidationError("amplitudes contain NaN or infinity")
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > _numerics().norm_tolerance:
            raise StateValidationError(f"state is not normalized (norm = {norm!r})")
        object.__setattr__(self, 'dims', dims)
        object.__setattr__(self, 'amplitudes', _frozen(amplitudes))

    @classmethod
    def from_unnormalized(cls, dims, amplitudes) -> 'PureState':
        """Build a state from amplitudes that still need normalizing."""
        vector = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(vector)
        if norm == 0 or not np.isfinite(norm):
            raise StateValidationError("cannot normalize a zero or non-finite vector")
        return cls(DimVector.of(dims), vector / norm)

    @classmethod
    def basis(cls, dims, digits: Tuple[int, ...]) -> 'PureState':
        """Computational basis state |digits>."""
        dims = DimVector.of(dims)
        index = int(np.ravel_multi_index(tuple(digits), dims.dims))
        vector = np.zeros(dims.total_dim, dtype=np.complex128)
        vector[index] = 1.0
        return cls(dims, vector)

    @property
    def n_subsystems(self) -> int:
        return self.dims.n_subsystems

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amplitudes.reshape(self.dims.dims)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': 'pure',
            'dims': list(self.dims.dims),
            'amplitudes': [[float(z.real), float(z.imag)] for z in self.amplitudes],
        }


@dataclass(frozen=True)
class DensityOperator:
    """
    Positive semidefinite, unit-trace Hermitian operator on a register.

    Attributes:
        dims (DimVector): Register dimensions
        matrix (np.ndarray): Square complex matrix of size total_dim
        spectrum (np.ndarray): Eigenvalues in descending order, tiny negatives clipped to 0
    """
    dims: DimVector
    matrix: np.ndarray = field(repr=False)
    spectrum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dims = DimVector.of(self.dims)
        matrix = np.asarray(self.matrix)
        size = dims.total_dim
        if matrix.shape != (size, size):
            raise StateValidationError(f"expected a {size}x{size} matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise StateValidationError("matrix contains NaN or infinity")
        numerics = _numerics()
        asymmetry = float(np.max(np.abs(matrix - matrix.conj().T)))
        if asymmetry > numerics.hermitian_tolerance:
            raise StateValidationError(f"matrix is not Hermitian (max deviation {asymmetry:.3e})")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > numerics.trace_tolerance:
            raise StateValidationError(f"trace must be 1, got {trace.real!r}")
        eigenvalues = np.linalg.eigvalsh(matrix)[::-1]
        if eigenvalues[-1] < -numerics.psd_tolerance:
            raise StateValidationError(f"matrix is not positive semidefinite (min eigenvalue {eigenvalues[-1]:.3e})")
        spectrum = np.clip(eigenvalues, 0.0, None)
        spectrum.setflags(write=False)
        object.__setattr__(self, 'dims', dims)
        object.__setattr__(self, 'matrix', _frozen(matrix))
        object.__setattr__(self, 'spectrum', spectrum)

    @property
    def n_subsystems(self) -> int:
        return self.dims.n_subsystems

    def rank(self, cutoff: float = 1e-12) -> int:
        return int(np.count_nonzero(self.spectrum > cutoff))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def dominant_state(self) -> PureState:
        """Eigenvector of the largest eigenvalue as a PureState."""
        _, vectors = np.linalg.eigh(self.matrix)
        return PureState.from_unnormalized(self.dims, vectors[:, -1])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': 'density',
            'dims': list(self.dims.dims),
            'matrix': [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }


@dataclass(frozen=True)
class SchmidtDecomposition:
    """
    Schmidt form of a pure state across a bipartition.

    Attributes:
        partition (Partition): Bipartition the decomposition refers to
        coefficients (np.ndarray): Squared Schmidt coefficients, descending, summing to 1
        left_vectors (np.ndarray): Columns are orthonormal vectors on side A
        right_vectors (np.ndarray): Columns are orthonormal vectors on side B
    """
    partition: Partition
    coefficients: np.ndarray
    left_vectors: np.ndarray = field(repr=False)
    right_vectors: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return int(self.coefficients.shape[0])

    def bipartite_vector(self) -> np.ndarray:
        """Reassembled state in (side A, side B) ordering."""
        weights = np.sqrt(self.coefficients)
        matrix = (self.left_vectors * weights) @ self.right_vectors.T
        return matrix.reshape(-1)


AnyState = Union[PureState, DensityOperator]


def _complex_array(data: Any, what: str) -> np.ndarray:
    array = np.asarray(data, dtype=float)
    if array.shape[-1] != 2:
        raise StateInputError(f"{what} entries must be [real, imag] pairs")
    return array[..., 0] + 1j * array[..., 1]


def state_from_dict(data: Dict[str, Any]) -> AnyState:
    """
    Build a state from its JSON dictionary form.

    The form is `{"dims": [...], "amplitudes": [[re, im], ...]}` for a pure
    state or `{"dims": [...], "matrix": [[[re, im], ...], ...]}` for a
    density operator.

    Raises:
        StateInputError: If required keys are missing or malformed
        StateValidationError: If the decoded state breaks its invariants
    """
    if not isinstance(data, dict) or 'dims' not in data:
        raise StateInputError("state description needs a 'dims' entry")
    try:
        if 'amplitudes' in data:
            return PureState(DimVector.of(data['dims']), _complex_array(data['amplitudes'], 'amplitude'))
        if 'matrix' in data:
            return DensityOperator(DimVector.of(data['dims']), _complex_array(data['matrix'], 'matrix'))
    except StateValidationError:
        raise
    except (TypeError, IndexError, ValueError) as exc:
        raise StateInputError(f"malformed state description: {exc}") from exc
    raise StateInputError("state description needs 'amplitudes' or 'matrix'")


def load_state(path: Union[str, Path]) -> AnyState:
    """
    Read a state from a JSON file.

    Raises:
        StateInputError: If the file is missing or not valid JSON
    """
    path = Path(path)
    try:
        with open(path, 'r') as file:
            data = json.load(file)
    except FileNotFoundError:
        raise StateInputError(f"state file {path} not found") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise StateInputError(f"cannot read state file {path}: {exc}") from exc
    return state_from_dict(data)


def save_state(state: AnyState, path: Union[str, Path]) -> None:
    """Write a state to a JSON file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as file:
        json.dump(state.to_dict(), file, indent=2)
