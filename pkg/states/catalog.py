"""
Named states: W, GHZ, the parametrized three-qubit families of the worked
examples, and the two qutrit states that violate CKW.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from models.errors import StateInputError, StateValidationError
from models.quantum_state import PureState
from models.register import DimVector

PARAMETER_NORM_TOLERANCE = 1e-10

EXAMPLE1_PARAMETERS = (1 / 5, math.sqrt(15) / 5, 2 / 5, 2 / 5, 1 / 5)
GSD_EXAMPLE2_PARAMETERS = (math.sqrt(1 / 5), 0.0, math.sqrt(2 / 5), math.sqrt(1 / 5), math.sqrt(1 / 5))


@dataclass(frozen=True)
class StateRecipe:
    """
    A named, parametrized state constructor.

    Attributes:
        name (str): Builtin name, e.g. `gsd-example2`
        parameters (Dict[str, float]): Parameter values passed to the builder
        dims (Tuple[int, ...]): Register of the resulting state
        description (str): One-line summary
    """
    name: str
    parameters: Dict[str, float]
    dims: Tuple[int, ...]
    description: str = ""
    builder: Callable[..., PureState] = field(default=None, repr=False, compare=False)

    def build(self) -> PureState:
        state = self.builder(**self.parameters)
        if state.dims.dims != self.dims:
            raise StateValidationError(f"recipe {self.name} built dims {list(state.dims)}, expected {list(self.dims)}")
        return state


def _qubit_state(amplitudes: Dict[str, complex]) -> PureState:
    n = len(next(iter(amplitudes)))
    vector = np.zeros(2 ** n, dtype=np.complex128)
    for bits, amplitude in amplitudes.items():
        vector[int(bits, 2)] = amplitude
    return PureState.from_unnormalized(DimVector((2,) * n), vector)


def w_state(n: int = 3) -> PureState:
    """Equal superposition of the n weight-one basis states."""
    if n < 2:
        raise StateValidationError(f"W state needs n >= 2, got {n}")
    vector = np.zeros(2 ** n, dtype=np.complex128)
    for k in range(n):
        vector[1 << k] = 1.0 / math.sqrt(n)
    return PureState(DimVector((2,) * n), vector)


def ghz_state(n: int = 3) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2)"""
    if n < 2:
        raise StateValidationError(f"GHZ state needs n >= 2, got {n}")
    vector = np.zeros(2 ** n, dtype=np.complex128)
    vector[0] = vector[-1] = 1.0 / math.sqrt(2)
    return PureState(DimVector((2,) * n), vector)


def _check_unit_sum(values, what: str) -> None:
    norm = sum(v * v for v in values)
    if abs(norm - 1.0) > PARAMETER_NORM_TOLERANCE:
        raise StateValidationError(f"{what} squares must sum to 1, got {norm!r}")


def example1_state(p1: float, p2: float, p3: float, p4: float, p5: float, theta: float = 0.0) -> PureState:
    """
    p1 e^{i theta}|000> + p2|001> + p3|010> + p4|100> + p5|111>.

    Raises:
        StateValidationError: Unless every p_i > 0, sum p_i^2 = 1 and 0 <= theta < pi
    """
    params = (p1, p2, p3, p4, p5)
    if any(p <= 0 for p in params):
        raise StateValidationError(f"all p_i must be positive, got {params}")
    _check_unit_sum(params, "p_i")
    if not 0.0 <= theta < math.pi:
        raise StateValidationError(f"theta must lie in [0, pi), got {theta}")
    return _qubit_state({
        '000': p1 * np.exp(1j * theta),
        '001': p2,
        '010': p3,
        '100': p4,
        '111': p5,
    })


def gsd_state(t0: float, t1: float, t2: float, t3: float, t4: float, phi: float = 0.0) -> PureState:
    """
    Generalized Schmidt form t0|000> + t1 e^{i phi}|100> + t2|101> + t3|110> + t4|111>.

    Raises:
        StateValidationError: Unless every t_i >= 0 and sum t_i^2 = 1
    """
    params = (t0, t1, t2, t3, t4)
    if any(t < 0 for t in params):
        raise StateValidationError(f"all coefficients must be non-negative, got {params}")
    _check_unit_sum(params, "coefficient")
    return _qubit_state({
        '000': t0,
        '100': t1 * np.exp(1j * phi),
        '101': t2,
        '110': t3,
        '111': t4,
    })


def ou_state() -> PureState:
    """Totally antisymmetric three-qutrit state (labels 1..3 stored as 0..2)."""
    terms = {(0, 1, 2): 1, (0, 2, 1): -1, (1, 2, 0): 1, (1, 0, 2): -1, (2, 0, 1): 1, (2, 1, 0): -1}
    dims = DimVector((3, 3, 3))
    vector = np.zeros(dims.total_dim, dtype=np.complex128)
    for digits, sign in terms.items():
        vector[np.ravel_multi_index(digits, dims.dims)] = sign / math.sqrt(6)
    return PureState(dims, vector)


def kim_sanders_state() -> PureState:
    """(sqrt2|010> + sqrt2|101> + |200> + |211>)/sqrt6 on a qutrit and two qubits."""
    terms = {(0, 1, 0): math.sqrt(2), (1, 0, 1): math.sqrt(2), (2, 0, 0): 1.0, (2, 1, 1): 1.0}
    dims = DimVector((3, 2, 2))
    vector = np.zeros(dims.total_dim, dtype=np.complex128)
    for digits, amplitude in terms.items():
        vector[np.ravel_multi_index(digits, dims.dims)] = amplitude / math.sqrt(6)
    return PureState(dims, vector)


@dataclass(frozen=True)
class Example1Quantities:
    """Concurrence ingredients of the first worked example."""
    c_a_bc_sq: float
    c_ab: float
    c_ac: float
    kappa: float

    def as_dict(self) -> Dict[str, float]:
        return {'c_a_bc_sq': self.c_a_bc_sq, 'c_ab': self.c_ab, 'c_ac': self.c_ac, 'kappa': self.kappa}


def example1_quoted_values() -> Example1Quantities:
    """Component values as quoted for the first worked example, verbatim."""
    return Example1Quantities(
        c_a_bc_sq=48 / 625,
        c_ab=2 * (4 - math.sqrt(15)) / 25,
        c_ac=2 * (2 * math.sqrt(5) - 2) / 25,
        kappa=(4 / 25) * ((16 * math.sqrt(15) + 1) / 125) ** 2,
    )


def example1_closed_forms(p1: float, p2: float, p3: float, p4: float, p5: float,
                          theta: float = 0.0) -> Example1Quantities:
    """
    Quoted closed-form expressions of the first example, evaluated at given parameters.

    These are diagnostics: they are stated for theta = 0 only and do not all
    agree with the values computed from the state.
    """
    if theta != 0.0:
        raise ValueError("the closed forms are stated for theta = 0 only")
    return Example1Quantities(
        c_a_bc_sq=-4 * (p4 ** 2 - p5 ** 2 + p5 ** 4 + p4 ** 2 * (-1 + p1 ** 2 + 2 * p5 ** 2)),
        c_ab=2 * abs(p3 * p4 - p2 * p5),
        c_ac=2 * abs(p2 * p4 - p3 * p5),
        kappa=4 * p5 ** 2 * (4 * p2 * p3 * p4 + p1 ** 2 * p5) ** 2,
    )


@dataclass(frozen=True)
class GsdClosedForms:
    """CREN values of a generalized-Schmidt state."""
    n_a_bc: float
    n_ab: float
    n_ac: float

    @property
    def epsilon(self) -> float:
        return self.n_a_bc ** 2 - self.n_ab ** 2 - self.n_ac ** 2


def gsd_closed_forms(t0: float, t1: float, t2: float, t3: float, t4: float) -> GsdClosedForms:
    """
    N(A|BC) = 2 t0 sqrt(t2^2 + t3^2 + t4^2), N(AB) = 2 t0 t3, N(AC) = 2 t0 t2.

    The pairwise expressions are usually quoted the other way round
    (2 t0 t2 for AB). In |ABC> ordering the |110> amplitude t3 is the one
    that entangles A with B, so each expression is attached to its pair here.
    """
    return GsdClosedForms(
        n_a_bc=2 * t0 * math.sqrt(t2 ** 2 + t3 ** 2 + t4 ** 2),
        n_ab=2 * t0 * t3,
        n_ac=2 * t0 * t2,
    )


def _params(names: str, values) -> Dict[str, float]:
    return dict(zip(names.split(), values))


BUILTIN_RECIPES: Dict[str, StateRecipe] = {
    'w3': StateRecipe('w3', {'n': 3}, (2, 2, 2), "three-qubit W state", w_state),
    'ghz3': StateRecipe('ghz3', {'n': 3}, (2, 2, 2), "three-qubit GHZ state", ghz_state),
    'ghz4': StateRecipe('ghz4', {'n': 4}, (2, 2, 2, 2), "four-qubit GHZ state", ghz_state),
    'example1': StateRecipe('example1', _params('p1 p2 p3 p4 p5', EXAMPLE1_PARAMETERS), (2, 2, 2),
                            "first worked example at its quoted parameters", example1_state),
    'gsd-example2': StateRecipe('gsd-example2', _params('t0 t1 t2 t3 t4', GSD_EXAMPLE2_PARAMETERS), (2, 2, 2),
                                "generalized-Schmidt instance of the second worked example", gsd_state),
    'ou': StateRecipe('ou', {}, (3, 3, 3), "antisymmetric three-qutrit state", ou_state),
    'kim-sanders': StateRecipe('kim-sanders', {}, (3, 2, 2), "qutrit-qubit-qubit CKW counterexample",
                               kim_sanders_state),
}


def builtin_names() -> List[str]:
    return list(BUILTIN_RECIPES)


def resolve_builtin(name: str) -> PureState:
    """
    Build a builtin state by name.

    Raises:
        StateInputError: If the name is unknown
    """
    recipe = BUILTIN_RECIPES.get(name)
    if recipe is None:
        raise StateInputError(f"unknown builtin state {name!r}; choose from {', '.join(BUILTIN_RECIPES)}")
    return recipe.build()
