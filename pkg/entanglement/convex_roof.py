"""
Convex-roof upper bounds by descent over pure-state decompositions.

A mixed state rho = sum_k lambda_k |e_k><e_k| of rank r has, for every
ensemble size m >= r, a family of decompositions parametrized by m x r
isometries V: the unnormalized members are psi_j = sum_k V_jk sqrt(lambda_k) e_k.
The average pure-state measure over that family is minimized by Riemannian
gradient descent on the Stiefel manifold with a polar retraction and an
Armijo line search, restarted from several random isometries.

The result is an upper bound only. The interval attached to it uses the
negativity of rho (for the negativity objective) and any caller-provided
lower bound.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from config.config_manager import RoofConfig
from models.errors import NumericalConsistencyError, OptimizerError
from models.measure_value import Interval, MeasureMethod, MeasureValue
from models.quantum_state import AnyState, DensityOperator
from models.register import Partition
from utils.logging_utils import get_logger, log_optimizer_run
from utils.tensor_ops import as_density, partial_transpose, trace_norm

logger = get_logger(__name__)

RANK_CUTOFF = 1e-12
RECONSTRUCTION_TOLERANCE = 1e-8
FLOOR_TOLERANCE = 1e-8
ARMIJO_SLOPE = 1e-4
MIN_STEP = 1e-12
MAX_STEP = 16.0
STALL_PATIENCE = 5
ZERO_PRODUCT = 1e-30


class RoofObjective(Enum):
    """Pure-state measure whose convex roof is bounded"""
    NEGATIVITY = "negativity"
    CONCURRENCE = "concurrence"


@dataclass
class DecompositionPoint:
    """
    A pure-state decomposition of a density operator.

    Attributes:
        isometry (np.ndarray): m x r matrix with orthonormal columns
        probabilities (np.ndarray): Weights p_j, summing to 1
        states (np.ndarray): Row j is the normalized |psi_j> (zero when p_j = 0)
    """
    isometry: np.ndarray
    probabilities: np.ndarray
    states: np.ndarray

    @property
    def ensemble_size(self) -> int:
        return int(self.isometry.shape[0])

    def reconstruct(self) -> np.ndarray:
        """sum_j p_j |psi_j><psi_j|"""
        weighted = self.states * np.sqrt(self.probabilities)[:, None]
        return weighted.T @ weighted.conj()


@dataclass
class RestartOutcome:
    """Result of one descent run."""
    index: int
    value: float
    iterations: int
    converged: bool
    isometry: np.ndarray = field(repr=False)


@dataclass
class RoofOptimization:
    """
    Outcome of a full multi-restart optimization.

    Attributes:
        best_value (float): Minimum over restarts
        best_restart (int): Lowest restart index attaining it
        restart_values (List[float]): Final value per restart, in index order
        running_best (List[float]): Best-so-far after each restart, non-increasing
        converged (bool): True if every restart met the tolerance
        point (DecompositionPoint): Best decomposition found
    """
    best_value: float
    best_restart: int
    restart_values: List[float]
    running_best: List[float]
    converged: bool
    point: DecompositionPoint


def pure_measure_from_singular_values(singular: np.ndarray, objective: RoofObjective) -> np.ndarray:
    """
    Pure-state measure from Schmidt singular values (not squared).

    Works on the last axis, so a batch of states can be evaluated at once.
    Negativity is (sum s)^2 - 1 and concurrence is 2 sqrt(sum_{i<k} s_i^2 s_k^2)
    for a normalized state.
    """
    if objective is RoofObjective.NEGATIVITY:
        return np.sum(singular, axis=-1) ** 2 - np.sum(singular ** 2, axis=-1)
    squares = singular ** 2
    e2 = 0.5 * (np.sum(squares, axis=-1) ** 2 - np.sum(squares ** 2, axis=-1))
    return 2.0 * np.sqrt(np.clip(e2, 0.0, None))


class ConvexRoofOptimizer:
    """
    Minimizes the average pure-state measure over decompositions of rho.

    The objective per unnormalized member psi_j is the homogeneous
    extension h(psi_j) = p_j * measure(psi_j / sqrt(p_j)), so the total is a
    smooth function of the isometry wherever singular values stay distinct.
    """

    def __init__(self, rho: DensityOperator, partition: Partition,
                 objective: RoofObjective, config: Optional[RoofConfig] = None):
        self.rho = rho
        self.partition = partition
        self.objective = objective
        self.config = config or RoofConfig()

        partition.require_cover(rho.dims)
        eigenvalues, eigenvectors = scipy.linalg.eigh(rho.matrix)
        order = np.argsort(eigenvalues)[::-1]
        eigenvalues, eigenvectors = eigenvalues[order], eigenvectors[:, order]
        support = eigenvalues > RANK_CUTOFF
        if not np.any(support):
            raise OptimizerError("density operator has no support above the rank cutoff")
        self.rank = int(np.count_nonzero(support))
        # Columns are sqrt(lambda_k) e_k
        self.ensemble_basis = eigenvectors[:, support] * np.sqrt(eigenvalues[support])
        self.ensemble_size = self.config.resolved_ensemble_size(self.rank)
        if self.ensemble_size < self.rank:
            raise ValueError(f"ensemble size {self.ensemble_size} is below the rank {self.rank}")

        dims = rho.dims
        self._axis_order = list(partition.side_a) + list(partition.side_b)
        self._inverse_order = list(np.argsort(self._axis_order))
        self._permuted_shape = [dims[k] for k in self._axis_order]
        self._dim_a = dims.dim_of(partition.side_a)
        self._dim_b = dims.dim_of(partition.side_b)

    def members(self, isometry: np.ndarray) -> np.ndarray:
        """Unnormalized decomposition members, one per row."""
        return isometry @ self.ensemble_basis.T

    def _to_matrices(self, members: np.ndarray) -> np.ndarray:
        m = members.shape[0]
        tensor = members.reshape([m] + list(self.rho.dims.dims))
        tensor = tensor.transpose([0] + [k + 1 for k in self._axis_order])
        return tensor.reshape(m, self._dim_a, self._dim_b)

    def _from_matrices(self, matrices: np.ndarray) -> np.ndarray:
        m = matrices.shape[0]
        tensor = matrices.reshape([m] + self._permuted_shape)
        tensor = tensor.transpose([0] + [k + 1 for k in self._inverse_order])
        return tensor.reshape(m, -1)

    def _value_and_gradient(self, isometry: np.ndarray, with_gradient: bool = True
                            ) -> Tuple[float, Optional[np.ndarray]]:
        members = self.members(isometry)
        matrices = self._to_matrices(members)
        left, singular, right_h = np.linalg.svd(matrices, full_matrices=False)
        total = float(np.sum(pure_measure_from_singular_values(singular, self.objective)))
        if not with_gradient:
            return total, None

        if self.objective is RoofObjective.NEGATIVITY:
            sums = np.sum(singular, axis=-1, keepdims=True)
            slopes = 2.0 * (sums - singular)
        else:
            squares = singular ** 2
            s2 = np.sum(squares, axis=-1, keepdims=True)
            e2 = 0.5 * (s2[..., 0] ** 2 - np.sum(squares ** 2, axis=-1))
            root = np.sqrt(np.clip(e2, 0.0, None))[..., None]
            safe_root = np.where(root > np.sqrt(ZERO_PRODUCT), root, 1.0)
            slopes = np.where(root > np.sqrt(ZERO_PRODUCT),
                              2.0 * singular * (s2 - squares) / safe_root, 0.0)

        member_gradients = left @ (slopes[..., None] * right_h)
        euclidean = self._from_matrices(member_gradients) @ self.ensemble_basis.conj()
        return total, euclidean

    def value(self, isometry: np.ndarray) -> float:
        """Average measure of the decomposition given by `isometry`."""
        return self._value_and_gradient(isometry, with_gradient=False)[0]

    def riemannian_gradient(self, isometry: np.ndarray, euclidean: np.ndarray) -> np.ndarray:
        """Project a Euclidean gradient onto the tangent space of the Stiefel manifold."""
        inner = isometry.conj().T @ euclidean
        return euclidean - isometry @ ((inner + inner.conj().T) / 2.0)

    def check_reconstruction(self, isometry: np.ndarray) -> None:
        """
        Raise OptimizerError unless the decomposition reproduces rho.

        Raises:
            OptimizerError: If any entry deviates by more than 1e-8
        """
        members = self.members(isometry)
        rebuilt = members.T @ members.conj()
        deviation = float(np.max(np.abs(rebuilt - self.rho.matrix)))
        if deviation > RECONSTRUCTION_TOLERANCE:
            raise OptimizerError(f"decomposition drifted from the target state (deviation {deviation:.3e})")

    def initial_isometry(self, index: int) -> np.ndarray:
        """
        Starting isometry for restart `index`.

        Restart 0 is the eigen-ensemble; the others are Haar-random
        isometries drawn from a per-restart child seed.
        """
        m, r = self.ensemble_size, self.rank
        if index == 0:
            return np.eye(m, r, dtype=np.complex128)
        rng = np.random.default_rng(np.random.SeedSequence(self.config.seed, spawn_key=(index,)))
        gaussian = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
        return scipy.linalg.polar(gaussian)[0]

    def run_restart(self, index: int) -> RestartOutcome:
        """Descend from the restart's initial isometry until the objective stalls."""
        isometry = self.initial_isometry(index)
        self.check_reconstruction(isometry)
        value, euclidean = self._value_and_gradient(isometry)
        step = 1.0
        stalls = 0
        converged = False
        iterations = 0

        for iterations in range(1, self.config.max_iterations + 1):
            gradient = self.riemannian_gradient(isometry, euclidean)
            slope = float(np.real(np.vdot(gradient, gradient)))
            if slope < ZERO_PRODUCT:
                converged = True
                break

            trial_step = step
            while True:
                candidate = scipy.linalg.polar(isometry - trial_step * gradient)[0]
                candidate_value = self.value(candidate)
                if candidate_value <= value - ARMIJO_SLOPE * trial_step * slope:
                    break
                trial_step /= 2.0
                if trial_step < MIN_STEP:
                    candidate = None
                    break

            if candidate is None:
                converged = True
                break

            self.check_reconstruction(candidate)
            improvement = value - candidate_value
            isometry = candidate
            value, euclidean = self._value_and_gradient(isometry)
            step = min(2.0 * trial_step, MAX_STEP)

            if improvement < self.config.tolerance:
                stalls += 1
                if stalls >= STALL_PATIENCE:
                    converged = True
                    break
            else:
                stalls = 0

        return RestartOutcome(index=index, value=max(value, 0.0), iterations=iterations,
                              converged=converged, isometry=isometry)

    def decomposition(self, isometry: np.ndarray) -> DecompositionPoint:
        """Normalized ensemble for an isometry."""
        members = self.members(isometry)
        probabilities = np.real(np.sum(members * members.conj(), axis=1))
        norms = np.sqrt(probabilities)
        states = np.zeros_like(members)
        nonzero = norms > 0
        states[nonzero] = members[nonzero] / norms[nonzero, None]
        return DecompositionPoint(isometry=isometry, probabilities=probabilities, states=states)

    def optimize(self) -> RoofOptimization:
        """
        Run every restart and reduce by minimum, ties going to the lowest index.

        With `workers` > 1 the restarts run on a thread pool; the result is
        identical to the sequential run.
        """
        indices = range(self.config.restarts)
        if self.config.workers > 1 and self.config.restarts > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                outcomes = list(pool.map(self.run_restart, indices))
        else:
            outcomes = [self.run_restart(i) for i in indices]

        outcomes.sort(key=lambda outcome: outcome.index)
        values = [outcome.value for outcome in outcomes]
        running_best = list(np.minimum.accumulate(values))
        best = min(outcomes, key=lambda outcome: (outcome.value, outcome.index))
        return RoofOptimization(
            best_value=best.value,
            best_restart=best.index,
            restart_values=values,
            running_best=[float(v) for v in running_best],
            converged=all(outcome.converged for outcome in outcomes),
            point=self.decomposition(best.isometry),
        )


def negativity_lower_bound(rho: DensityOperator, partition: Partition) -> float:
    """Negativity of rho itself, which never exceeds its convex-roof extension."""
    return max(trace_norm(partial_transpose(rho, partition.side_a)) - 1.0, 0.0)


def roof_upper_bound(rho: AnyState, partition: Partition,
                     objective: RoofObjective = RoofObjective.NEGATIVITY,
                     config: Optional[RoofConfig] = None,
                     lower_bound: Optional[float] = None) -> MeasureValue:
    """
    Upper-bound a convex-roof measure by optimizing over decompositions.

    Args:
        rho (AnyState): State over a register covered by `partition`
        partition (Partition): Bipartition; side A is the transposed side
        objective (RoofObjective): Pure-state measure to extend
        config (Optional[RoofConfig]): Optimizer settings (defaults if None)
        lower_bound (Optional[float]): Externally certified lower bound, if any

    Returns:
        MeasureValue: Best value found, method convex_roof_upper, with its bracket

    Raises:
        OptimizerError: If a candidate decomposition stops reproducing rho
        NumericalConsistencyError: If the best decomposition undercuts the lower bound
    """
    config = config or RoofConfig()
    rho = as_density(rho)
    partition.require_cover(rho.dims)

    floor = 0.0
    if objective is RoofObjective.NEGATIVITY:
        floor = negativity_lower_bound(rho, partition)
    if lower_bound is not None:
        floor = max(floor, float(lower_bound))

    optimizer = ConvexRoofOptimizer(rho, partition, objective, config)
    if optimizer.rank == 1:
        exact = optimizer.value(np.eye(1, 1, dtype=np.complex128))
        exact = max(exact, 0.0)
        return MeasureValue(exact, MeasureMethod.CONVEX_ROOF_UPPER, Interval.exact(exact))

    result = optimizer.optimize()
    log_optimizer_run(objective.value, config.restarts, result.best_value,
                      result.best_restart, result.converged, logger=logger)
    if result.best_value < floor - FLOOR_TOLERANCE * max(1.0, floor):
        raise NumericalConsistencyError(
            f"convex-roof upper bound {result.best_value!r} lies below its lower bound {floor!r}"
        )
    # rounding noise only
    best = max(result.best_value, floor)
    return MeasureValue(best, MeasureMethod.CONVEX_ROOF_UPPER,
                        Interval(min(floor, best), best), converged=result.converged)
