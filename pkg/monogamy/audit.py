"""
Audit engine: compare the left-hand side E^nu(A|rest) with every bound.

Ingredients that come from the convex-roof optimizer are intervals. Each
bound is then evaluated over a grid of the uncertain ingredients with the
residual recomputed consistently at every grid point, which gives a
worst-case RHS range [rhs_low, rhs_high] next to the best-estimate RHS.
The verdict is four-valued:

    HOLDS              LHS >= rhs_high (certain)
    HOLDS_AT_ESTIMATE  LHS >= rhs_estimate
    INDETERMINATE      LHS >= rhs_low
    VIOLATED           LHS <  rhs_low (fails with certainty)

each comparison up to max(relative * |LHS|, absolute).
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from dataclasses_json import dataclass_json

from config.config_manager import RoofConfig
from entanglement.measures import bipartite_measure, pairwise_measures, residual_entanglement
from models.errors import BoundEvaluationError, StateValidationError
from models.measure_value import MeasureKind, MeasureValue
from models.quantum_state import AnyState, PureState
from models.register import Partition
from utils.logging_utils import get_logger, log_audit_summary, log_bound_violation

from .bounds import BoundId, BoundSpec, bounds_for, check_nu, evaluate

logger = get_logger(__name__)

DEFAULT_RELATIVE_TOLERANCE = 1e-8
DEFAULT_ABSOLUTE_TOLERANCE = 1e-12
DEFAULT_GRID_POINTS = 9
PURITY_RANK_ONE = 1 - 1e-10
TIE_TOLERANCE = 1e-12

Triple = Tuple[float, float, float]


class Verdict(Enum):
    """Outcome of comparing the LHS with one bound"""
    HOLDS = "holds"
    HOLDS_AT_ESTIMATE = "holds_at_estimate"
    INDETERMINATE = "indeterminate"
    VIOLATED = "violated"


@dataclass_json
@dataclass
class BoundRow:
    """
    One bound evaluated at one power.

    Attributes:
        bound_id (str): Bound identifier
        nu (float): Power
        lhs (float): E^nu(A|rest) from the best estimate
        rhs_low (float): Smallest RHS over the ingredient box
        rhs_high (float): Largest RHS over the ingredient box
        rhs_estimate (float): RHS at the best-estimate ingredients
        margin (float): lhs - rhs_estimate
        worst_margin (float): lhs_low - rhs_high
        verdict (str): Verdict value
    """
    bound_id: str
    nu: float
    lhs: float
    rhs_low: float
    rhs_high: float
    margin: float
    verdict: str
    rhs_estimate: float
    worst_margin: float

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.HOLDS.value


@dataclass_json
@dataclass
class NuResult:
    """All bounds at one power."""
    nu: float
    lhs: float
    lhs_low: float
    rows: List[BoundRow]
    tightest: Optional[str] = None
    dominance_holds: Optional[bool] = None


@dataclass_json
@dataclass
class IngredientSummary:
    """
    Measure ingredients of an audit, each as [lower, estimate, upper].

    Attributes:
        total (List[float]): E(A|rest)
        pairwise (Dict[str, List[float]]): E(A, B_i) keyed by subsystem index
        remainder (List[float]): E(A | B_2 ... B_{N-1})
        residual (List[float]): kappa or epsilon
    """
    first_subsystem: int
    b1: int
    total: List[float]
    pairwise: Dict[str, List[float]]
    remainder: List[float]
    residual: List[float]
    exact: bool


@dataclass_json
@dataclass
class AuditReport:
    """
    Full audit of one state.

    Rows are ordered by power, then by bound priority (lemma form first).
    """
    label: str
    measure_kind: str
    dims: List[int]
    nu_grid: List[float]
    ingredients: IngredientSummary
    results: List[NuResult] = field(default_factory=list)

    def rows(self) -> Iterator[BoundRow]:
        for result in self.results:
            yield from result.rows

    def verdict_counts(self) -> Dict[str, int]:
        counts = Counter(row.verdict for row in self.rows())
        return {verdict.value: counts.get(verdict.value, 0) for verdict in Verdict}

    def violations(self) -> List[BoundRow]:
        return [row for row in self.rows() if row.verdict == Verdict.VIOLATED.value]

    @property
    def all_hold(self) -> bool:
        return all(row.passed for row in self.rows())

    def min_margins(self) -> Dict[str, float]:
        """Smallest best-estimate margin per bound id."""
        margins: Dict[str, float] = {}
        for row in self.rows():
            margins[row.bound_id] = min(margins.get(row.bound_id, np.inf), row.margin)
        return margins


@dataclass
class AuditIngredients:
    """
    Ingredients in (lower, estimate, upper) form.

    Attributes:
        total (Triple): E(A|rest)
        first (Triple): E(A, B1)
        second (Triple): E(A | B2 ... B_{N-1})
        rest (List[Triple]): E(A, B_i) for i >= 2
        residual (Triple): kappa or epsilon bracket
        mixed (bool): Whether the audited state was mixed
    """
    total: Triple
    first: Triple
    second: Triple
    rest: List[Triple]
    residual: Triple
    mixed: bool = False

    @property
    def n_parties(self) -> int:
        return len(self.rest) + 2


def _triple(value: MeasureValue) -> Triple:
    return (value.lower, value.value, value.upper)


def _resolve_state(state: AnyState, allow_mixed: bool) -> AnyState:
    if isinstance(state, PureState):
        return state
    if state.purity() >= PURITY_RANK_ONE:
        return state.dominant_state()
    if not allow_mixed:
        raise StateValidationError("audits take pure states; enable allow_mixed for mixed inputs")
    return state


def collect_ingredients(state: AnyState, kind: MeasureKind, first: int = 0, b1: Optional[int] = None,
                        roof_config: Optional[RoofConfig] = None) -> Tuple[AuditIngredients, IngredientSummary]:
    """
    Compute every measure an audit needs.

    Raises:
        StateValidationError: Fewer than three subsystems, or a concurrence
            audit on a register that is not all qubits
    """
    n = state.n_subsystems
    if n < 3:
        raise StateValidationError("monogamy audits need at least three subsystems")
    if kind is MeasureKind.CONCURRENCE and not state.dims.is_qubit_register():
        raise StateValidationError("concurrence audits are restricted to qubit registers")
    state.dims.check_indices([first])
    others = [k for k in range(n) if k != first]
    b1 = others[0] if b1 is None else b1
    if b1 not in others:
        raise StateValidationError(f"b1 = {b1} must differ from the first subsystem {first}")
    remaining = [k for k in others if k != b1]

    pairwise = pairwise_measures(state, first, kind, roof_config)

    if isinstance(state, PureState):
        residual = residual_entanglement(state, kind, first, b1, roof_config, pairwise=pairwise)
        total, remainder = residual.total, residual.remainder
        residual_triple = (residual.lower, residual.value, residual.upper)
        mixed = False
    else:
        split = Partition.split(n, first)
        total = bipartite_measure(state, split, kind, roof_config)
        remainder = pairwise[remaining[0]]
        residual_triple = (0.0, 0.0, 0.0)
        mixed = True

    ingredients = AuditIngredients(
        total=_triple(total),
        first=_triple(pairwise[b1]),
        second=_triple(remainder),
        rest=[_triple(pairwise[k]) for k in remaining],
        residual=residual_triple,
        mixed=mixed,
    )
    summary = IngredientSummary(
        first_subsystem=first,
        b1=b1,
        total=list(ingredients.total),
        pairwise={str(k): list(_triple(v)) for k, v in pairwise.items()},
        remainder=list(ingredients.second),
        residual=list(residual_triple),
        exact=all(v.is_exact for v in pairwise.values()) and remainder.is_exact and total.is_exact,
    )
    return ingredients, summary


def _axis(triple: Triple, points: int, extras: Sequence[float]) -> np.ndarray:
    lo, est, hi = triple
    if hi <= lo:
        return np.array([est])
    candidates = [np.linspace(lo, hi, max(points, 2)), [est]]
    candidates.append([min(max(x, lo), hi) for x in extras])
    return np.unique(np.concatenate(candidates))


def evaluate_bound(spec: BoundSpec, ingredients: AuditIngredients,
                   grid_points: int = DEFAULT_GRID_POINTS) -> Tuple[float, float, float]:
    """
    RHS of one bound as (low, estimate, high) over the ingredient box.

    The residual is recomputed from the total at every grid point and the
    remaining pairwise values enter monotonically through their endpoints.

    Raises:
        BoundEvaluationError: If the evaluation fails or yields a non-finite value
    """
    try:
        t2 = ingredients.total[1] ** 2
        rest_lo = [r[0] for r in ingredients.rest]
        rest_est = [r[1] for r in ingredients.rest]
        rest_hi = [r[2] for r in ingredients.rest]
        three_party = ingredients.n_parties == 3

        est_first, est_second = ingredients.first[1], ingredients.second[1]
        est_kappa = t2 - est_first ** 2 - est_second ** 2
        estimate = evaluate(spec.id, spec.nu, est_first, est_second,
                            [est_second] if three_party else rest_est, est_kappa)

        rest_term = sum(v ** 2 for v in rest_hi)
        xs = _axis(ingredients.first, grid_points,
                   [ingredients.second[0], ingredients.second[2], np.sqrt(rest_term)])
        ys = _axis(ingredients.second, grid_points, [ingredients.first[0], ingredients.first[2]])
        x, y = np.meshgrid(xs, ys)
        kappa = t2 - x ** 2 - y ** 2
        if three_party:
            low_values = high_values = evaluate(spec.id, spec.nu, x, y, [y], kappa)
        else:
            low_values = evaluate(spec.id, spec.nu, x, y, rest_lo, kappa)
            high_values = evaluate(spec.id, spec.nu, x, y, rest_hi, kappa)
        low = min(float(np.min(low_values)), estimate)
        high = max(float(np.max(high_values)), estimate)
    except (ValueError, ArithmeticError) as exc:
        raise BoundEvaluationError(spec.id.value, spec.nu, exc) from exc
    if not all(np.isfinite(v) for v in (low, estimate, high)):
        raise BoundEvaluationError(spec.id.value, spec.nu, ValueError("non-finite bound value"))
    return low, estimate, high


def classify(lhs_low: float, lhs: float, rhs_low: float, rhs_estimate: float, rhs_high: float,
             relative_tolerance: float = DEFAULT_RELATIVE_TOLERANCE,
             absolute_tolerance: float = DEFAULT_ABSOLUTE_TOLERANCE) -> Verdict:
    """Four-valued verdict for one bound."""
    tolerance = max(relative_tolerance * abs(lhs), absolute_tolerance)
    if lhs_low >= rhs_high - tolerance:
        return Verdict.HOLDS
    if lhs >= rhs_estimate - tolerance:
        return Verdict.HOLDS_AT_ESTIMATE
    if lhs >= rhs_low - tolerance:
        return Verdict.INDETERMINATE
    return Verdict.VIOLATED


def _tightest(rows: List[BoundRow]) -> Optional[str]:
    """Largest non-violated RHS; values within TIE_TOLERANCE go to the earlier row."""
    best: Optional[BoundRow] = None
    for row in rows:
        if row.verdict == Verdict.VIOLATED.value:
            continue
        if best is None or row.rhs_estimate > best.rhs_estimate + TIE_TOLERANCE * max(1.0, abs(best.rhs_estimate)):
            best = row
    return best.bound_id if best is not None else None


def _dominance(rows: List[BoundRow], tolerance: float) -> Optional[bool]:
    by_family = {BoundId(row.bound_id).family: row for row in rows}
    if 'lemma' not in by_family or 'prod2021' not in by_family:
        return None
    return by_family['lemma'].rhs_estimate >= by_family['prod2021'].rhs_estimate - tolerance


def audit(state: AnyState, first_subsystem: int = 0,
          measure_kind: MeasureKind = MeasureKind.CONCURRENCE,
          nu_grid: Sequence[float] = (2.0,),
          tolerance: float = DEFAULT_RELATIVE_TOLERANCE,
          b1: Optional[int] = None,
          label: str = "state",
          roof_config: Optional[RoofConfig] = None,
          absolute_tolerance: float = DEFAULT_ABSOLUTE_TOLERANCE,
          grid_points: int = DEFAULT_GRID_POINTS,
          allow_mixed: bool = False) -> AuditReport:
    """
    Audit every applicable monogamy bound of a state over a grid of powers.

    Args:
        state (AnyState): Pure state (mixed only with allow_mixed)
        first_subsystem (int): Subsystem playing A
        measure_kind (MeasureKind): Concurrence or CREN
        nu_grid (Sequence[float]): Powers, each at least 2
        tolerance (float): Relative tolerance of the comparisons
        b1 (Optional[int]): Subsystem playing B1
        label (str): Name carried into the report
        roof_config (Optional[RoofConfig]): Convex-roof optimizer settings
        absolute_tolerance (float): Absolute floor of the comparison tolerance
        grid_points (int): Grid points per uncertain ingredient
        allow_mixed (bool): Accept mixed states; only summation bounds are then evaluated

    Returns:
        AuditReport: One NuResult per power

    Raises:
        StateValidationError: For inputs outside the audit's scope
        BoundEvaluationError: If a bound cannot be evaluated
    """
    nu_grid = [float(nu) for nu in nu_grid]
    for nu in nu_grid:
        check_nu(nu)
    state = _resolve_state(state, allow_mixed)
    ingredients, summary = collect_ingredients(state, measure_kind, first_subsystem, b1, roof_config)

    report = AuditReport(label=label, measure_kind=measure_kind.value, dims=list(state.dims.dims),
                         nu_grid=nu_grid, ingredients=summary)

    total_low, total_est = ingredients.total[0], ingredients.total[1]
    for nu in nu_grid:
        lhs = total_est ** nu
        lhs_low = total_low ** nu
        comparison_tolerance = max(tolerance * abs(lhs), absolute_tolerance)
        rows = []
        for spec in bounds_for(measure_kind, nu):
            if ingredients.mixed and spec.id.family != 'sum':
                continue
            rhs_low, rhs_estimate, rhs_high = evaluate_bound(spec, ingredients, grid_points)
            verdict = classify(lhs_low, lhs, rhs_low, rhs_estimate, rhs_high, tolerance, absolute_tolerance)
            row = BoundRow(bound_id=spec.id.value, nu=nu, lhs=lhs, rhs_low=rhs_low, rhs_high=rhs_high,
                           margin=lhs - rhs_estimate, verdict=verdict.value, rhs_estimate=rhs_estimate,
                           worst_margin=lhs_low - rhs_high)
            if verdict is not Verdict.HOLDS:
                log_bound_violation(label, nu, row.bound_id, row.worst_margin, row.verdict, logger=logger)
            rows.append(row)
        report.results.append(NuResult(nu=nu, lhs=lhs, lhs_low=lhs_low, rows=rows,
                                       tightest=_tightest(rows),
                                       dominance_holds=_dominance(rows, comparison_tolerance)))

    log_audit_summary(label, report.verdict_counts(), logger=logger)
    return report


def ckw_comparison(state: AnyState, pairwise_values: Optional[Sequence[float]] = None,
                   first: int = 0) -> Dict[str, float]:
    """
    Compare C^2(A|rest) with the sum of squared pairwise concurrences.

    The total uses the pure-state formula; pairwise values are either given
    (e.g. quoted values) or computed from the reduced states.

    Returns:
        Dict[str, float]: total_sq, pairwise_sq_sum, gap and violated (1.0 or 0.0)
    """
    state = _resolve_state(state, allow_mixed=False)
    split = Partition.split(state.n_subsystems, first)
    total = bipartite_measure(state, split, MeasureKind.CONCURRENCE)
    if pairwise_values is None:
        pairwise_values = [v.value for v in pairwise_measures(state, first, MeasureKind.CONCURRENCE).values()]
    total_sq = total.value ** 2
    pairwise_sq = float(sum(v ** 2 for v in pairwise_values))
    return {
        'total_sq': total_sq,
        'pairwise_sq_sum': pairwise_sq,
        'gap': total_sq - pairwise_sq,
        'violated': float(total_sq < pairwise_sq),
    }
