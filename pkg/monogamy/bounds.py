"""
Monogamy bound evaluators.

Every bound is a pure arithmetic function of measure ingredients: the
pairwise values E(A,B_i), the total E(A|B_1...B_{N-1}) and the residual
kappa (concurrence) or epsilon (CREN). Scalars and numpy arrays are both
accepted so the audit can evaluate a whole ingredient grid in one call.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np

from models.measure_value import Interval, MeasureKind

Number = Union[float, np.ndarray]

MIN_NU = 2.0


class BoundId(Enum):
    """Identifiers of the monogamy bounds"""
    SUM_C = "sum_C"
    PROD2020_C = "prod2020_C"
    PROD2021_C = "prod2021_C"
    LEMMA1_C = "lemma1_C"
    THEOREM1_C = "theorem1_C"
    THEOREM1_SUM_C = "theorem1_sum_C"
    SUM_N = "sum_N"
    PROD2021_N = "prod2021_N"
    LEMMA3_N = "lemma3_N"
    THEOREM2_N = "theorem2_N"
    THEOREM2_SUM_N = "theorem2_sum_N"

    @property
    def measure_kind(self) -> MeasureKind:
        return MeasureKind.CONCURRENCE if self.value.endswith('_C') else MeasureKind.CREN

    @property
    def family(self) -> str:
        """Kind-independent family name: sum, prod2020, prod2021, lemma, theorem or theorem_sum."""
        stem = self.value[:-2]
        if stem.startswith('lemma'):
            return 'lemma'
        if stem.startswith('theorem'):
            return 'theorem_sum' if stem.endswith('_sum') else 'theorem'
        return stem


BOUNDS_BY_KIND = {
    MeasureKind.CONCURRENCE: (BoundId.LEMMA1_C, BoundId.THEOREM1_C, BoundId.THEOREM1_SUM_C,
                              BoundId.PROD2021_C, BoundId.PROD2020_C, BoundId.SUM_C),
    MeasureKind.CREN: (BoundId.LEMMA3_N, BoundId.THEOREM2_N, BoundId.THEOREM2_SUM_N,
                       BoundId.PROD2021_N, BoundId.SUM_N),
}


@dataclass(frozen=True)
class BoundSpec:
    """
    A bound identifier applied at a given power.

    Attributes:
        id (BoundId): Bound identifier
        nu (float): Power, at least 2
    """
    id: BoundId
    nu: float

    def __post_init__(self):
        check_nu(self.nu)
        if self.id is BoundId.PROD2020_C and self.nu != 2.0:
            raise ValueError("prod2020_C is only defined at nu = 2")

    @property
    def measure_kind(self) -> MeasureKind:
        return self.id.measure_kind


def bounds_for(kind: MeasureKind, nu: float) -> Tuple[BoundSpec, ...]:
    """Applicable bounds for a measure kind at power nu, in tie-break priority order."""
    return tuple(BoundSpec(bound_id, nu) for bound_id in BOUNDS_BY_KIND[kind]
                 if bound_id is not BoundId.PROD2020_C or nu == 2.0)


def check_nu(nu: float) -> None:
    if not nu >= MIN_NU:
        raise ValueError(f"nu must be >= {MIN_NU}, got {nu}")


def _result(value: Number) -> Number:
    return float(value) if np.ndim(value) == 0 else value


def _clamp(kappa: Number) -> Number:
    return np.maximum(kappa, 0.0)


def kappa_half_terms(c_ab_sq: Number, c_ac_sq: Number, kappa: Number, nu: float) -> Number:
    """
    [4 (c_ab^2 + kappa/2) (c_ac^2 + kappa/2)]^(nu/4).

    Args:
        c_ab_sq (Number): Squared first pairwise value
        c_ac_sq (Number): Squared second pairwise value (or grouped term)
        kappa (Number): Residual entanglement, clamped at 0
        nu (float): Power, at least 2

    Returns:
        Number: Bound value
    """
    check_nu(nu)
    half = _clamp(kappa) / 2.0
    return _result(np.power(4.0 * (c_ab_sq + half) * (c_ac_sq + half), nu / 4.0))


def zhang2021(c_ab: Number, c_ac: Number, kappa: Number, nu: float) -> Number:
    """(4 c_ab^2 c_ac^2 + kappa^2)^(nu/4)."""
    check_nu(nu)
    kappa = _clamp(kappa)
    return _result(np.power(4.0 * c_ab ** 2 * c_ac ** 2 + kappa ** 2, nu / 4.0))


def zhang2020(c_ab: Number, c_ac: Number, kappa: Number) -> Number:
    """2 (c_ab^2 c_ac^2 + kappa^2/4)^(1/2), the nu = 2 product form."""
    kappa = _clamp(kappa)
    return _result(2.0 * np.sqrt(c_ab ** 2 * c_ac ** 2 + kappa ** 2 / 4.0))


def sum_bound(pairwise: Sequence[Number], nu: float) -> Number:
    """sum_i v_i^nu over the pairwise values."""
    check_nu(nu)
    total = 0.0
    for value in pairwise:
        total = total + np.power(value, nu)
    return _result(total)


def geometric_mean(values: Sequence[Number]) -> Number:
    """
    Geometric mean, taken as 0 as soon as one factor is 0.

    Scalar inputs use math.prod and an exact 1/n power, so a single value
    is returned unchanged.
    """
    values = list(values)
    if not values:
        raise ValueError("geometric mean of an empty list")
    if all(np.ndim(v) == 0 for v in values):
        if len(values) == 1:
            return float(values[0])
        product = math.prod(float(v) for v in values)
        return product ** (1.0 / len(values)) if product > 0 else 0.0
    product = np.prod(np.stack(np.broadcast_arrays(*values)), axis=0)
    if len(values) == 1:
        return product
    return np.where(product > 0, np.power(np.maximum(product, 0.0), 1.0 / len(values)), 0.0)


def amgm_chain(pairwise_sq: Sequence[float], total_sq: float) -> Tuple[float, float, float]:
    """
    Return (geometric mean, arithmetic mean, total^2/(N-1)) of the squared pairwise values.

    For valid monogamous ingredients the chain geo <= arith <= cap holds.
    """
    pairwise_sq = [float(v) for v in pairwise_sq]
    if not pairwise_sq:
        raise ValueError("amgm_chain needs at least one pairwise value")
    count = len(pairwise_sq)
    return geometric_mean(pairwise_sq), sum(pairwise_sq) / count, float(total_sq) / count


def _theorem_value(c_ab1_sq: Number, rest_term: Number, kappa, nu: float):
    if isinstance(kappa, Interval):
        return Interval(kappa_half_terms(c_ab1_sq, rest_term, kappa.lower, nu),
                        kappa_half_terms(c_ab1_sq, rest_term, kappa.upper, nu))
    return kappa_half_terms(c_ab1_sq, rest_term, kappa, nu)


def theorem_bound(c_ab1_sq: Number, pairwise_rest_sq: Sequence[Number],
                  kappa: Union[Number, Interval], nu: float):
    """
    Product bound for N parties with a geometric mean of the remaining pairwise terms.

    [4 (c_ab1^2 + kappa/2) ((N-2) * geomean(c_abi^2, i >= 2) + kappa/2)]^(nu/4).
    With three parties the geometric-mean term is the single remaining value
    and the result equals kappa_half_terms() exactly.

    Args:
        c_ab1_sq (Number): Squared pairwise value with B1
        pairwise_rest_sq (Sequence[Number]): Squared pairwise values with B2..B_{N-1}
        kappa (Union[Number, Interval]): Residual entanglement, exact or bracketed
        nu (float): Power, at least 2

    Returns:
        Number or Interval: Interval endpoints are the values at the kappa endpoints
    """
    rest = list(pairwise_rest_sq)
    if not rest:
        raise ValueError("theorem_bound needs at least one remaining pairwise value")
    rest_term = geometric_mean(rest) if len(rest) == 1 else len(rest) * geometric_mean(rest)
    return _theorem_value(c_ab1_sq, rest_term, kappa, nu)


def theorem_mean_bound(c_ab1_sq: Number, pairwise_rest_sq: Sequence[Number],
                       kappa: Union[Number, Interval], nu: float):
    """Same as theorem_bound() with the plain sum of the remaining squared values."""
    rest = list(pairwise_rest_sq)
    if not rest:
        raise ValueError("theorem_mean_bound needs at least one remaining pairwise value")
    rest_term = rest[0]
    for value in rest[1:]:
        rest_term = rest_term + value
    return _theorem_value(c_ab1_sq, rest_term, kappa, nu)


def counterexample_bound(n_sq: float, n_prime_sq: float, epsilon: float, nu: float) -> float:
    """Three-party CREN product bound from squared pairwise values and epsilon."""
    return kappa_half_terms(n_sq, n_prime_sq, epsilon, nu)


def evaluate(bound_id: BoundId, nu: float, first: Number, second: Number,
             rest: Sequence[Number], kappa: Number) -> Number:
    """
    Evaluate one bound on (possibly array-valued) ingredients.

    Args:
        bound_id (BoundId): Bound to evaluate
        nu (float): Power
        first (Number): Pairwise value with B1
        second (Number): Value of A | (B2 ... B_{N-1}); the second pairwise value for three parties
        rest (Sequence[Number]): Pairwise values with B2 ... B_{N-1}
        kappa (Number): Residual consistent with (total, first, second)

    Returns:
        Number: Right-hand side of the bound
    """
    family = bound_id.family
    if family == 'sum':
        return sum_bound([first] + list(rest), nu)
    if family == 'prod2020':
        return zhang2020(first, second, kappa)
    if family == 'prod2021':
        return zhang2021(first, second, kappa, nu)
    if family == 'lemma':
        return kappa_half_terms(first ** 2, second ** 2, kappa, nu)
    rest_sq = [value ** 2 for value in rest]
    if family == 'theorem':
        return theorem_bound(first ** 2, rest_sq, kappa, nu)
    return theorem_mean_bound(first ** 2, rest_sq, kappa, nu)


def nu_range(nu_min: float = MIN_NU, nu_max: float = 10.0, step: float = 0.25) -> Tuple[float, ...]:
    """Powers nu_min, nu_min + step, ... up to nu_max inclusive."""
    check_nu(nu_min)
    if step <= 0:
        raise ValueError(f"nu step must be positive, got {step}")
    if nu_max < nu_min:
        raise ValueError(f"nu_max {nu_max} is below nu_min {nu_min}")
    count = int(math.floor((nu_max - nu_min) / step + 1e-9)) + 1
    return tuple(round(nu_min + k * step, 12) for k in range(count))
