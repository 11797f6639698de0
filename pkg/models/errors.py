"""
Error types for the monogamy audit toolkit.

Every failure raised by the library derives from EntanglementError so the
command-line front end can map it to a stable exit code.
"""


class EntanglementError(Exception):
    """Base class for all library errors."""


class StateValidationError(EntanglementError, ValueError):
    """A state or matrix breaks one of its invariants (norm, trace, PSD, dims)."""


class PartitionError(EntanglementError, ValueError):
    """An index set or bipartition does not fit the register it is applied to."""


class StateInputError(EntanglementError):
    """A state file could not be read or a builtin state name is unknown."""


class OptimizerError(EntanglementError, RuntimeError):
    """The convex-roof optimizer produced an invalid decomposition."""


class NumericalConsistencyError(EntanglementError, ArithmeticError):
    """An internal cross-check between two exact formulas disagreed."""


class BoundEvaluationError(EntanglementError):
    """
    A monogamy bound could not be evaluated.

    Attributes:
        bound_id (str): Identifier of the offending bound
        nu (float): Power at which the evaluation failed
    """

    def __init__(self, bound_id: str, nu: float, cause: Exception):
        super().__init__(f"bound {bound_id} failed at nu={nu}: {cause}")
        self.bound_id = bound_id
        self.nu = nu
        self.cause = cause
