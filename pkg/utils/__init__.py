"""
Utility functions package for the monogamy audit toolkit.

This package contains the tensor-algebra primitives shared by every
measure and the logging helpers used throughout the toolkit.
"""

from .logging_utils import (
    log_audit_summary,
    log_bound_violation,
    log_measure_evaluation,
    log_optimizer_run,
    log_system_event,
    setup_logging,
)
from .tensor_ops import (
    hermitian_eigenvalues,
    partial_trace,
    partial_transpose,
    schmidt,
    tensor_product,
    to_density,
    trace_norm,
)

__all__ = [
    'setup_logging',
    'log_measure_evaluation',
    'log_optimizer_run',
    'log_bound_violation',
    'log_audit_summary',
    'log_system_event',
    'tensor_product',
    'to_density',
    'partial_trace',
    'partial_transpose',
    'trace_norm',
    'schmidt',
    'hermitian_eigenvalues',
]
