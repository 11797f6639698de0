"""
Result types for entanglement measures.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Optional

from dataclasses_json import dataclass_json

from .errors import StateValidationError

INTERVAL_SLACK = 1e-12


class MeasureKind(Enum):
    """Entanglement measure family"""
    CONCURRENCE = "concurrence"
    CREN = "cren"


class MeasureMethod(Enum):
    """How a measure value was obtained"""
    CLOSED_FORM_PURE = "closed_form_pure"
    WOOTTERS = "wootters"
    SCHMIDT_FORMULA = "schmidt_formula"
    TRACE_NORM = "trace_norm"
    CONVEX_ROOF_UPPER = "convex_roof_upper"


@dataclass_json
@dataclass(frozen=True)
class Interval:
    """Closed interval [lower, upper] bracketing a quantity."""
    lower: float
    upper: float

    def __post_init__(self):
        lower, upper = float(self.lower), float(self.upper)
        if lower > upper + INTERVAL_SLACK:
            raise StateValidationError(f"interval lower bound {lower} exceeds upper bound {upper}")
        object.__setattr__(self, 'lower', min(lower, upper))
        object.__setattr__(self, 'upper', upper)

    @classmethod
    def exact(cls, value: float) -> 'Interval':
        return cls(value, value)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def is_exact(self) -> bool:
        return self.width == 0.0

    def contains(self, value: float, slack: float = INTERVAL_SLACK) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def map_increasing(self, fn: Callable[[float], float]) -> 'Interval':
        """Image of the interval under a non-decreasing function."""
        return Interval(fn(self.lower), fn(self.upper))

    def map_decreasing(self, fn: Callable[[float], float]) -> 'Interval':
        """Image of the interval under a non-increasing function."""
        return Interval(fn(self.upper), fn(self.lower))

    def __iter__(self) -> Iterator[float]:
        yield self.lower
        yield self.upper


@dataclass_json
@dataclass(frozen=True)
class MeasureValue:
    """
    Value of an entanglement measure.

    Attributes:
        value (float): Exact value, or best upper estimate for optimizer results
        method (MeasureMethod): Evaluation route
        interval (Optional[Interval]): Certified bracket when the value is not exact
        converged (bool): False when the optimizer hit its iteration cap
    """
    value: float
    method: MeasureMethod
    interval: Optional[Interval] = None
    converged: bool = True

    def __post_init__(self):
        value = float(self.value)
        if value < 0:
            raise StateValidationError(f"measure value must be non-negative, got {value}")
        object.__setattr__(self, 'value', value)

    @property
    def is_exact(self) -> bool:
        return self.interval is None or self.interval.is_exact

    @property
    def lower(self) -> float:
        return self.interval.lower if self.interval is not None else self.value

    @property
    def upper(self) -> float:
        return self.interval.upper if self.interval is not None else self.value


@dataclass(frozen=True)
class ResidualEntanglement:
    """
    Residual (three-way) entanglement left after subtracting pairwise terms.

    Attributes:
        value (float): Residual computed from the best estimates
        measure_kind (MeasureKind): Measure the residual is built from
        uncertainty (Optional[Interval]): Bracket when an ingredient is an optimizer bound
        cross_check (Optional[float]): Independent closed-form value, when one exists
        total (Optional[MeasureValue]): Measure across first | rest
        first_pair (Optional[MeasureValue]): Measure of the (first, b1) reduced state
        remainder (Optional[MeasureValue]): Measure of first | (remaining parties)
    """
    value: float
    measure_kind: MeasureKind
    uncertainty: Optional[Interval] = None
    cross_check: Optional[float] = None
    total: Optional[MeasureValue] = None
    first_pair: Optional[MeasureValue] = None
    remainder: Optional[MeasureValue] = None

    @property
    def lower(self) -> float:
        return self.uncertainty.lower if self.uncertainty is not None else self.value

    @property
    def upper(self) -> float:
        return self.uncertainty.upper if self.uncertainty is not None else self.value
