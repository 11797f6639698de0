"""
Serialization of audit reports.

JSON carries the full AuditReport. CSV carries one row per
state x nu x bound, with a fixed column order and locale-independent
number formatting, so the two formats can be cross-checked row by row.
"""

import csv
import io
import json
from pathlib import Path
from typing import Iterable, List, Union

from .audit import AuditReport

CSV_COLUMNS = ['label', 'nu', 'bound_id', 'lhs', 'rhs_low', 'rhs_high', 'margin', 'verdict',
               'rhs_estimate', 'worst_margin']


def format_float(value: float, spec: str = '.17g') -> str:
    """Shortest-exact decimal text for a float, independent of the locale."""
    return format(float(value), spec)


def report_to_json(report: AuditReport) -> str:
    return json.dumps(report.to_dict(), indent=2)


def reports_to_json(reports: Iterable[AuditReport]) -> str:
    return json.dumps([report.to_dict() for report in reports], indent=2)


def report_from_json(text: str) -> AuditReport:
    return AuditReport.from_dict(json.loads(text))


def csv_rows(report: AuditReport, float_format: str = '.17g') -> List[List[str]]:
    """CSV rows of a report, without the header."""
    rows = []
    for row in report.rows():
        rows.append([
            report.label,
            format_float(row.nu, float_format),
            row.bound_id,
            format_float(row.lhs, float_format),
            format_float(row.rhs_low, float_format),
            format_float(row.rhs_high, float_format),
            format_float(row.margin, float_format),
            row.verdict,
            format_float(row.rhs_estimate, float_format),
            format_float(row.worst_margin, float_format),
        ])
    return rows


def reports_to_csv(reports: Iterable[AuditReport], float_format: str = '.17g') -> str:
    """CSV text of several reports, ordered by label and then nu."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for report in sorted(reports, key=lambda r: r.label):
        writer.writerows(csv_rows(report, float_format))
    return buffer.getvalue()


def report_to_csv(report: AuditReport, float_format: str = '.17g') -> str:
    return reports_to_csv([report], float_format)


def write_report(report: Union[AuditReport, List[AuditReport]], path: Union[str, Path],
                 fmt: str = 'json') -> Path:
    """
    Write one or more reports to `path` as JSON or CSV.

    Args:
        report (Union[AuditReport, List[AuditReport]]): Report(s) to write
        path (Union[str, Path]): Destination file
        fmt (str): 'json' or 'csv'

    Returns:
        Path: The written path
    """
    reports = report if isinstance(report, list) else [report]
    if fmt == 'csv':
        text = reports_to_csv(reports)
    elif fmt == 'json':
        text = report_to_json(reports[0]) if len(reports) == 1 else reports_to_json(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def parse_csv(text: str) -> List[dict]:
    """Read CSV text produced by reports_to_csv() back into dictionaries."""
    reader = csv.DictReader(io.StringIO(text))
    parsed = []
    for record in reader:
        entry = dict(record)
        for column in ('nu', 'lhs', 'rhs_low', 'rhs_high', 'margin', 'rhs_estimate', 'worst_margin'):
            entry[column] = float(entry[column])
        parsed.append(entry)
    return parsed
