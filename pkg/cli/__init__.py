"""
Command-line package for the monogamy audit toolkit.

This package contains the validated run settings and the subcommand
implementations wired up by main.py.
"""

from .commands import (
    EXIT_ERROR,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_VALIDATION_ERROR,
    EXIT_VIOLATION,
    cmd_audit,
    cmd_counterexamples,
    cmd_croof,
    cmd_figure,
    cmd_measure,
    cmd_random_audit,
    resolve_state,
    run_command,
)
from .run_config import RunConfig

__all__ = [
    'RunConfig', 'run_command', 'resolve_state',
    'cmd_measure', 'cmd_audit', 'cmd_figure', 'cmd_random_audit', 'cmd_counterexamples', 'cmd_croof',
    'EXIT_OK', 'EXIT_ERROR', 'EXIT_INPUT_ERROR', 'EXIT_VALIDATION_ERROR', 'EXIT_VIOLATION',
]
