"""
Bipartite entanglement measures and residual entanglements.

Pure-state concurrence and negativity (directly and through Schmidt
coefficients), Wootters concurrence for two-qubit mixed states, the
spin-flip overlap, the convex-roof extended negativity (CREN) and the
residual entanglements kappa (concurrence) and epsilon (CREN).

Negativity follows the ||rho^T_A|| - 1 convention unless the Vidal-Werner
convention is requested explicitly.
"""

import itertools
import math
from enum import Enum
from typing import Dict, Optional

import numpy as np
import scipy.linalg

from config.config_manager import RoofConfig, get_config
from models.errors import NumericalConsistencyError, StateValidationError
from models.measure_value import Interval, MeasureKind, MeasureMethod, MeasureValue, ResidualEntanglement
from models.quantum_state import AnyState, DensityOperator, PureState
from models.register import DimVector, Partition
from utils.logging_utils import get_logger, log_measure_evaluation
from utils.tensor_ops import (
    as_density,
    hermitian_eigenvalues,
    partial_trace,
    partial_trace_pure,
    partial_transpose,
    schmidt,
    trace_norm,
)

from .convex_roof import RoofObjective, roof_upper_bound

logger = get_logger(__name__)

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)

SPECTRUM_TOLERANCE = 1e-8
ROOT_CUTOFF = 1e-14
NEGATIVITY_CLIP = 1e-10
PURITY_RANK_ONE = 1 - 1e-10
KAPPA_AGREEMENT = 1e-8


class NegativityConvention(Enum):
    """Normalization of the negativity"""
    STANDARD = "standard"   # ||rho^T_A|| - 1
    VIDAL = "vidal"   # (||rho^T_A|| - 1) / 2


def _require_two_qubits(rho: DensityOperator) -> None:
    if rho.dims.dims != (2, 2):
        raise StateValidationError(f"two-qubit state required, got dims {list(rho.dims)}")


def concurrence_pure(psi: PureState, partition: Partition) -> MeasureValue:
    """
    Concurrence sqrt(2 (1 - Tr rho_A^2)) of a pure state.

    Raises:
        PartitionError: If the partition does not cover the register
    """
    partition.require_cover(psi.dims)
    rho_a = partial_trace_pure(psi, partition.side_a)
    purity = float(np.real(np.trace(rho_a.matrix @ rho_a.matrix)))
    value = math.sqrt(max(2.0 * (1.0 - purity), 0.0))
    log_measure_evaluation('concurrence', str(partition), value, MeasureMethod.CLOSED_FORM_PURE.value, logger=logger)
    return MeasureValue(value, MeasureMethod.CLOSED_FORM_PURE)


def spin_flip(rho: DensityOperator) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y) for a two-qubit state."""
    _require_two_qubits(rho)
    return SPIN_FLIP @ rho.matrix.conj() @ SPIN_FLIP


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = scipy.linalg.eigh(matrix)
    # eigenvalues below the cutoff are kernel rounding noise
    eigenvalues = np.where(eigenvalues > ROOT_CUTOFF, eigenvalues, 0.0)
    return (vectors * np.sqrt(eigenvalues)) @ vectors.conj().T


def spin_flip_roots(rho: DensityOperator) -> np.ndarray:
    """
    Descending square roots of the eigenvalues of rho * rho_tilde.

    They are the singular values of sqrt(rho) sqrt(rho_tilde), whose squares
    are the spectrum of the Hermitian matrix sqrt(rho) rho_tilde sqrt(rho),
    similar to rho * rho_tilde. This stays accurate for rank-deficient rho,
    where rho * rho_tilde need not be diagonalizable in floating point.

    Raises:
        NumericalConsistencyError: If the squared roots do not add up to Tr(rho rho_tilde)
    """
    _require_two_qubits(rho)
    root = _psd_sqrt(rho.matrix)
    flipped_root = SPIN_FLIP @ root.conj() @ SPIN_FLIP
    roots = scipy.linalg.svdvals(root @ flipped_root)
    overlap = tilde_overlap(rho)
    if abs(float(np.sum(roots ** 2)) - overlap) > SPECTRUM_TOLERANCE:
        raise NumericalConsistencyError(
            f"spin-flip roots {roots} do not reproduce Tr(rho rho_tilde) = {overlap!r}"
        )
    return roots


def wootters_concurrence(rho: DensityOperator, partition: Optional[Partition] = None) -> MeasureValue:
    """
    Wootters concurrence max(r1 - r2 - r3 - r4, 0) of a two-qubit state.

    `partition` only labels the log record; it defaults to 0:1.
    """
    roots = spin_flip_roots(rho)
    value = min(max(roots[0] - roots[1] - roots[2] - roots[3], 0.0), 1.0)
    label = str(partition) if partition is not None else str(Partition((0,), (1,)))
    log_measure_evaluation('concurrence', label, value, MeasureMethod.WOOTTERS.value, logger=logger)
    return MeasureValue(value, MeasureMethod.WOOTTERS)


def tilde_overlap(rho: DensityOperator) -> float:
    """Tr(rho rho_tilde), equal to the sum of the squared spin-flip roots."""
    return float(np.real(np.trace(rho.matrix @ spin_flip(rho))))


def negativity(rho: AnyState, partition: Partition,
               convention: NegativityConvention = NegativityConvention.STANDARD) -> MeasureValue:
    """
    Negativity from the trace norm of the partial transpose on side A.

    Args:
        rho (AnyState): State over a register covered by `partition`
        partition (Partition): Bipartition, side A transposed
        convention (NegativityConvention): STANDARD (default) or VIDAL

    Returns:
        MeasureValue: Negativity with method trace_norm
    """
    rho = as_density(rho)
    partition.require_cover(rho.dims)
    raw = trace_norm(partial_transpose(rho, partition.side_a)) - 1.0
    if raw < -NEGATIVITY_CLIP:
        raise NumericalConsistencyError(f"trace norm of partial transpose below 1: {raw + 1.0!r}")
    value = max(raw, 0.0)
    if convention is NegativityConvention.VIDAL:
        value /= 2.0
    log_measure_evaluation('negativity', str(partition), value, MeasureMethod.TRACE_NORM.value, logger=logger)
    return MeasureValue(value, MeasureMethod.TRACE_NORM)


def is_ppt(rho: AnyState, partition: Partition, tolerance: float = 1e-10) -> bool:
    """Whether the partial transpose on side A has no eigenvalue below -tolerance."""
    rho = as_density(rho)
    partition.require_cover(rho.dims)
    spectrum = hermitian_eigenvalues(partial_transpose(rho, partition.side_a))
    return bool(spectrum[-1] >= -tolerance)


def negativity_pure_schmidt(psi: PureState, partition: Partition) -> MeasureValue:
    """Negativity 2 * sum_{i<j} sqrt(theta_i theta_j) from the Schmidt coefficients."""
    coefficients = schmidt(psi, partition).coefficients
    value = 2.0 * sum(math.sqrt(a * b) for a, b in itertools.combinations(coefficients, 2))
    return MeasureValue(value, MeasureMethod.SCHMIDT_FORMULA)


def concurrence_pure_schmidt(psi: PureState, partition: Partition) -> MeasureValue:
    """Concurrence 2 * sqrt(sum_{i<j} theta_i theta_j) from the Schmidt coefficients."""
    coefficients = schmidt(psi, partition).coefficients
    value = 2.0 * math.sqrt(sum(a * b for a, b in itertools.combinations(coefficients, 2)))
    return MeasureValue(value, MeasureMethod.SCHMIDT_FORMULA)


def _as_pure(state: AnyState) -> Optional[PureState]:
    if isinstance(state, PureState):
        return state
    if state.purity() >= PURITY_RANK_ONE:
        return state.dominant_state()
    return None


def _is_two_qubit_split(state: DensityOperator, partition: Partition) -> bool:
    return state.dims.dims == (2, 2) and partition.indices == (0, 1)


def cren(state: AnyState, partition: Partition, config: Optional[RoofConfig] = None,
         lower_bound: Optional[float] = None) -> MeasureValue:
    """
    Convex-roof extended negativity.

    Pure (or rank-1) input gives the negativity of the pure state. A
    two-qubit mixed state gives its Wootters concurrence. Anything else
    is bounded from above by the convex-roof optimizer.

    Args:
        state (AnyState): State over a register covered by `partition`
        partition (Partition): Bipartition
        config (Optional[RoofConfig]): Optimizer settings
        lower_bound (Optional[float]): Certified lower bound to attach to optimizer results

    Returns:
        MeasureValue: Exact value, or an upper bound with its interval
    """
    partition.require_cover(state.dims)
    pure = _as_pure(state)
    if pure is not None:
        return negativity_pure_schmidt(pure, partition)
    if _is_two_qubit_split(state, partition):
        return wootters_concurrence(state, partition)
    return roof_upper_bound(state, partition, RoofObjective.NEGATIVITY, config, lower_bound)


def mixed_concurrence(state: AnyState, partition: Partition, config: Optional[RoofConfig] = None,
                      lower_bound: Optional[float] = None) -> MeasureValue:
    """Concurrence of a possibly mixed state, mirroring the dispatch of cren()."""
    partition.require_cover(state.dims)
    pure = _as_pure(state)
    if pure is not None:
        return concurrence_pure(pure, partition)
    if _is_two_qubit_split(state, partition):
        return wootters_concurrence(state, partition)
    return roof_upper_bound(state, partition, RoofObjective.CONCURRENCE, config, lower_bound)


def bipartite_measure(state: AnyState, partition: Partition, kind: MeasureKind,
                      config: Optional[RoofConfig] = None,
                      lower_bound: Optional[float] = None) -> MeasureValue:
    """Dispatch to cren() or mixed_concurrence() by measure kind."""
    if kind is MeasureKind.CREN:
        return cren(state, partition, config, lower_bound)
    return mixed_concurrence(state, partition, config, lower_bound)


def pairwise_measures(state: AnyState, first: int, kind: MeasureKind,
                      config: Optional[RoofConfig] = None) -> Dict[int, MeasureValue]:
    """Measure of every two-party reduced state (first, b), keyed by b."""
    values = {}
    for other in range(state.n_subsystems):
        if other == first:
            continue
        keep = sorted((first, other))
        reduced = partial_trace(state, keep)
        local = Partition((keep.index(first),), (keep.index(other),))
        values[other] = bipartite_measure(reduced, local, kind, config)
    return values


def _sum_form_lower_bound(pairwise: Dict[int, MeasureValue], parties, dims: DimVector) -> float:
    """sqrt(sum of squared pairwise lower ends), valid on qubit registers."""
    if not dims.is_qubit_register():
        return 0.0
    return math.sqrt(sum(pairwise[b].lower ** 2 for b in parties))


def residual_entanglement(psi: PureState, kind: MeasureKind, first: int = 0, b1: Optional[int] = None,
                          config: Optional[RoofConfig] = None,
                          pairwise: Optional[Dict[int, MeasureValue]] = None) -> ResidualEntanglement:
    """
    Residual entanglement E^2(first|rest) - E^2(first, b1) - E^2(first|remaining).

    With three parties the last term is the second pairwise value. With four
    or more it is a convex roof on a mixed reduced state, bracketed from
    above by the optimizer and from below by the summation-form monogamy of
    the remaining pairwise values (qubit registers) and, for CREN, by the
    negativity of that reduced state.

    Args:
        psi (PureState): Pure state with at least three subsystems
        kind (MeasureKind): Concurrence (kappa) or CREN (epsilon)
        first (int): Subsystem playing A
        b1 (Optional[int]): Subsystem playing B1 (first remaining index if None)
        config (Optional[RoofConfig]): Optimizer settings
        pairwise (Optional[Dict[int, MeasureValue]]): Precomputed pairwise values

    Returns:
        ResidualEntanglement: Value from best estimates plus its bracket
    """
    n = psi.n_subsystems
    if n < 3:
        raise StateValidationError("residual entanglement needs at least three subsystems")
    psi.dims.check_indices([first])
    others = [k for k in range(n) if k != first]
    b1 = others[0] if b1 is None else b1
    if b1 not in others:
        raise StateValidationError(f"b1 = {b1} must be a subsystem other than {first}")
    remaining = [k for k in others if k != b1]

    split = Partition.split(n, first)
    if kind is MeasureKind.CREN:
        total = negativity_pure_schmidt(psi, split)
    else:
        total = concurrence_pure(psi, split)

    if pairwise is None:
        pairwise = pairwise_measures(psi, first, kind, config)
    first_pair = pairwise[b1]

    if len(remaining) == 1:
        remainder = pairwise[remaining[0]]
    else:
        keep = sorted([first] + remaining)
        reduced = partial_trace_pure(psi, keep)
        local = Partition((keep.index(first),), tuple(keep.index(k) for k in remaining))
        floor = _sum_form_lower_bound(pairwise, remaining, psi.dims)
        remainder = bipartite_measure(reduced, local, kind, config, lower_bound=floor)

    t2 = total.value ** 2
    value = t2 - first_pair.value ** 2 - remainder.value ** 2
    uncertainty = None
    if not (first_pair.is_exact and remainder.is_exact):
        uncertainty = Interval(t2 - first_pair.upper ** 2 - remainder.upper ** 2,
                               t2 - first_pair.lower ** 2 - remainder.lower ** 2)
    return ResidualEntanglement(value=value, measure_kind=kind, uncertainty=uncertainty,
                                total=total, first_pair=first_pair, remainder=remainder)


def residual_kappa(psi: PureState) -> ResidualEntanglement:
    """
    Three-qubit residual concurrence kappa with its spin-flip cross-check.

    The cross-check is 4 * r1 * r2 from the two largest spin-flip roots of
    rho_AB. A disagreement above 1e-8 is logged; above the configured
    kappa_cross_check_tolerance (1e-6 by default) it is an error.

    Raises:
        StateValidationError: If the register is not three qubits
        NumericalConsistencyError: If kappa and 4 * r1 * r2 disagree beyond that tolerance
    """
    if psi.dims.dims != (2, 2, 2):
        raise StateValidationError(f"three-qubit state required, got dims {list(psi.dims)}")
    residual = residual_entanglement(psi, MeasureKind.CONCURRENCE)
    roots = spin_flip_roots(partial_trace_pure(psi, [0, 1]))
    cross_check = 4.0 * roots[0] * roots[1]
    mismatch = abs(residual.value - cross_check)
    if mismatch > get_config().numerics.kappa_cross_check_tolerance:
        raise NumericalConsistencyError(f"kappa {residual.value!r} disagrees with 4*r1*r2 {cross_check!r}")
    if mismatch > KAPPA_AGREEMENT:
        logger.warning(f"kappa cross-check off by {mismatch:.3e}")
    return ResidualEntanglement(value=residual.value, measure_kind=MeasureKind.CONCURRENCE,
                                cross_check=float(cross_check), total=residual.total,
                                first_pair=residual.first_pair, remainder=residual.remainder)


def residual_epsilon(psi: PureState, first: int = 0, b1: Optional[int] = None,
                     config: Optional[RoofConfig] = None) -> ResidualEntanglement:
    """CREN residual epsilon; see residual_entanglement()."""
    return residual_entanglement(psi, MeasureKind.CREN, first, b1, config)
