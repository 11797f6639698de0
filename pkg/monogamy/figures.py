"""
Curve data for the two worked examples.

fig1 plots C^nu(A|BC) of the first example next to the lemma-form,
zhang2021 and summation bounds; fig2 does the same with CREN for the
generalized-Schmidt instance. Ingredients come from the states
themselves. fig1 can also run on the quoted component values, and always
reports where those differ from the state-derived ones.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from dataclasses_json import dataclass_json

from entanglement.measures import residual_entanglement
from models.measure_value import MeasureKind
from states.catalog import (
    EXAMPLE1_PARAMETERS,
    GSD_EXAMPLE2_PARAMETERS,
    example1_closed_forms,
    example1_quoted_values,
    example1_state,
    gsd_closed_forms,
    gsd_state,
)
from utils.logging_utils import get_logger

from .bounds import kappa_half_terms, nu_range, sum_bound, zhang2021
from .report import format_float

logger = get_logger(__name__)

FIGURE_COLUMNS = ['nu', 'lhs', 'lemma_bound', 'zhang2021_bound', 'sum_bound']
BOUND_COLUMNS = FIGURE_COLUMNS[2:]
DISCREPANCY_TOLERANCE = 1e-10
ORDERING_TOLERANCE = 1e-12
FIGURES = ('fig1', 'fig2')


@dataclass_json
@dataclass
class FigureRow:
    nu: float
    lhs: float
    lemma_bound: float
    zhang2021_bound: float
    sum_bound: float


@dataclass_json
@dataclass
class Discrepancy:
    """
    One ingredient of the first example in its three renditions.

    Attributes:
        quantity (str): c_a_bc_sq, c_ab, c_ac or kappa
        state_value (float): Computed from the state
        quoted_value (float): As quoted with the example
        closed_form_value (float): Quoted closed form at the example's parameters
        mismatch (bool): Whether the quoted value differs from the state value
    """
    quantity: str
    state_value: float
    quoted_value: float
    closed_form_value: float
    mismatch: bool


@dataclass_json
@dataclass
class FigureData:
    """
    Rows of one figure plus the ingredients they were built from.

    Attributes:
        figure (str): fig1 or fig2
        measure_kind (str): Measure of every column
        source (str): 'state' or 'quoted-values'
        ingredients (Dict[str, float]): total, first, second, residual
        rows (List[FigureRow]): One row per power
        ordering_holds (bool): lemma > max(zhang2021, sum) strictly and lemma <= lhs on every row
        discrepancies (List[Discrepancy]): fig1 only
    """
    figure: str
    measure_kind: str
    source: str
    ingredients: Dict[str, float]
    rows: List[FigureRow] = field(default_factory=list)
    ordering_holds: bool = True
    discrepancies: List[Discrepancy] = field(default_factory=list)

    @property
    def mismatches(self) -> List[Discrepancy]:
        return [d for d in self.discrepancies if d.mismatch]

    def violations(self, tolerance: float = ORDERING_TOLERANCE) -> List[Tuple[FigureRow, str]]:
        """(row, column) pairs whose bound exceeds the left-hand side."""
        found = []
        for row in self.rows:
            slack = max(tolerance * row.lhs, tolerance)
            for column in BOUND_COLUMNS:
                if getattr(row, column) > row.lhs + slack:
                    found.append((row, column))
        return found


def figure_rows(total: float, first: float, second: float, residual: float,
                nu_grid: Sequence[float]) -> List[FigureRow]:
    """Evaluate the plotted curves from three-party ingredients."""
    rows = []
    for nu in nu_grid:
        rows.append(FigureRow(
            nu=float(nu),
            lhs=total ** nu,
            lemma_bound=kappa_half_terms(first ** 2, second ** 2, residual, nu),
            zhang2021_bound=zhang2021(first, second, residual, nu),
            sum_bound=sum_bound([first, second], nu),
        ))
    return rows


def ordering_holds(rows: Sequence[FigureRow], tolerance: float = ORDERING_TOLERANCE) -> bool:
    for row in rows:
        if not row.lemma_bound > max(row.zhang2021_bound, row.sum_bound):
            return False
        if row.lemma_bound > row.lhs + max(tolerance * row.lhs, tolerance):
            return False
    return True


def _state_ingredients(psi, kind: MeasureKind) -> Dict[str, float]:
    residual = residual_entanglement(psi, kind)
    return {
        'total': residual.total.value,
        'first': residual.first_pair.value,
        'second': residual.remainder.value,
        'residual': residual.value,
    }


def example1_discrepancies(state_values: Dict[str, float]) -> List[Discrepancy]:
    """Compare state-derived ingredients of the first example with the quoted values and closed forms."""
    quoted = example1_quoted_values().as_dict()
    closed = example1_closed_forms(*EXAMPLE1_PARAMETERS).as_dict()
    computed = {
        'c_a_bc_sq': state_values['total'] ** 2,
        'c_ab': state_values['first'],
        'c_ac': state_values['second'],
        'kappa': state_values['residual'],
    }
    found = []
    for quantity, value in computed.items():
        mismatch = abs(value - quoted[quantity]) > DISCREPANCY_TOLERANCE
        found.append(Discrepancy(quantity, value, quoted[quantity], closed[quantity], mismatch))
        if mismatch:
            logger.warning(f"example 1 {quantity}: state gives {value!r}, quoted {quoted[quantity]!r}")
    return found


def example1_figure(quoted_values: bool = False, nu_grid: Optional[Sequence[float]] = None) -> FigureData:
    """
    Curve data of the first example.

    Args:
        quoted_values (bool): Use the quoted component values verbatim instead of the state-derived ones
        nu_grid (Optional[Sequence[float]]): Powers (default 2 to 10 step 0.25)

    Returns:
        FigureData: Rows, the ordering check and the discrepancy report
    """
    nu_grid = nu_range() if nu_grid is None else nu_grid
    derived = _state_ingredients(example1_state(*EXAMPLE1_PARAMETERS), MeasureKind.CONCURRENCE)
    discrepancies = example1_discrepancies(derived)
    if quoted_values:
        quoted = example1_quoted_values()
        ingredients = {
            'total': math.sqrt(quoted.c_a_bc_sq),
            'first': quoted.c_ab,
            'second': quoted.c_ac,
            'residual': quoted.kappa,
        }
    else:
        ingredients = derived
    rows = figure_rows(ingredients['total'], ingredients['first'], ingredients['second'],
                       ingredients['residual'], nu_grid)
    return FigureData(figure='fig1', measure_kind=MeasureKind.CONCURRENCE.value,
                      source='quoted-values' if quoted_values else 'state',
                      ingredients=ingredients, rows=rows, ordering_holds=ordering_holds(rows),
                      discrepancies=discrepancies)


def example2_figure(nu_grid: Optional[Sequence[float]] = None) -> FigureData:
    """Curve data of the generalized-Schmidt example with CREN ingredients from the state."""
    nu_grid = nu_range() if nu_grid is None else nu_grid
    ingredients = _state_ingredients(gsd_state(*GSD_EXAMPLE2_PARAMETERS), MeasureKind.CREN)
    closed = gsd_closed_forms(*GSD_EXAMPLE2_PARAMETERS)
    for name, expected in (('total', closed.n_a_bc), ('first', closed.n_ab), ('second', closed.n_ac)):
        if abs(ingredients[name] - expected) > DISCREPANCY_TOLERANCE:
            logger.warning(f"example 2 {name}: state gives {ingredients[name]!r}, closed form {expected!r}")
    rows = figure_rows(ingredients['total'], ingredients['first'], ingredients['second'],
                       ingredients['residual'], nu_grid)
    return FigureData(figure='fig2', measure_kind=MeasureKind.CREN.value, source='state',
                      ingredients=ingredients, rows=rows, ordering_holds=ordering_holds(rows))


def build_figure(which: str, quoted_values: bool = False,
                 nu_grid: Optional[Sequence[float]] = None) -> FigureData:
    if which == 'fig1':
        return example1_figure(quoted_values, nu_grid)
    if which == 'fig2':
        if quoted_values:
            raise ValueError("quoted component values exist for fig1 only")
        return example2_figure(nu_grid)
    raise ValueError(f"unknown figure {which!r}; choose from {', '.join(FIGURES)}")


def figure_to_csv(data: FigureData, float_format: str = '.17g') -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(FIGURE_COLUMNS)
    for row in data.rows:
        writer.writerow([format_float(getattr(row, column), float_format) for column in FIGURE_COLUMNS])
    return buffer.getvalue()


def figure_to_json(data: FigureData) -> str:
    return json.dumps(data.to_dict(), indent=2)
