"""
Output storage for verification runs.

- run_log: RunLogger, a TSV log per run
- report: CheckRecord, VerificationReport and emit_report
- report_archive: ReportArchive, versioned copies of report.json

Philosophy:
    Everything a run leaves behind is a plain text file.
    TSV for logs and archive metadata, JSON for the report, CSV for tables.
    A diff is enough to compare two runs.
"""

from .report import (
    ANCHORS,
    STATUSES,
    CheckRecord,
    Table,
    VerificationReport,
    dumps_report,
    emit_report,
    load_report,
    status_for,
)
from .report_archive import ReportArchive, content_hash
from .run_log import RunLogger

__all__ = [
    "RunLogger",
    "ReportArchive",
    "content_hash",
    "ANCHORS",
    "STATUSES",
    "CheckRecord",
    "Table",
    "VerificationReport",
    "status_for",
    "dumps_report",
    "emit_report",
    "load_report",
]
