"""
Monogamy package for the monogamy audit toolkit.

This package contains the monogamy inequalities and their auditing:
- bounds: summation and product-form bound evaluators
- audit: LHS versus every bound, with interval-aware verdicts
- figures: curve data for the worked examples
- report: JSON and CSV serialization of audit reports
"""

from .bounds import (
    BoundId,
    BoundSpec,
    amgm_chain,
    bounds_for,
    counterexample_bound,
    kappa_half_terms,
    nu_range,
    sum_bound,
    theorem_bound,
    theorem_mean_bound,
    zhang2020,
    zhang2021,
)
from .audit import AuditReport, BoundRow, NuResult, Verdict, audit, ckw_comparison
from .report import report_from_json, report_to_csv, report_to_json, write_report
from .figures import FigureData, FigureRow, build_figure, example1_figure, example2_figure, figure_to_csv

__all__ = [
    'BoundId', 'BoundSpec', 'bounds_for',
    'kappa_half_terms', 'zhang2021', 'zhang2020', 'sum_bound', 'amgm_chain',
    'theorem_bound', 'theorem_mean_bound', 'counterexample_bound', 'nu_range',
    'AuditReport', 'BoundRow', 'NuResult', 'Verdict', 'audit', 'ckw_comparison',
    'report_to_json', 'report_from_json', 'report_to_csv', 'write_report',
    'FigureData', 'FigureRow', 'build_figure', 'example1_figure', 'example2_figure', 'figure_to_csv',
]
