"""This module contains report helpers."""

from __future__ import annotations

import logging
from typing import Optional

from pyfair.marketlib.audit import AuditReport
from pyfair.marketlib.report import (
    CsvReport,
    JsonReport,
)
from pyfair.marketlib.settings import get_report_format
from pyfair.marketlib.validators import validate_report_format

logger = logging.getLogger(__name__)


class ReportManager:
    """This class acts as a proxy to specific report adapter class.

    Supported report adapter class:

    - :class:`~pyfair.marketlib.report.json_report.JsonReport`
    - :class:`~pyfair.marketlib.report.csv_report.CsvReport`

    :param format_: Report format; defaults to `MARKETLIB_REPORT_FORMAT`.
    """

    def __init__(self, format_: Optional[str] = None):
        _format = format_ or get_report_format()
        validate_report_format(_format)
        if _format == "json":
            self.adapter = JsonReport()
        else:
            self.adapter = CsvReport()

    def dumps(self, report: AuditReport) -> str:
        """Serialize report.

        :param report: Audit report.
        :returns: Serialized text.
        """
        return self.adapter.dumps(report)

    def write(self, report: AuditReport, path: str) -> str:
        """Write report into a file.

        :param report: Audit report.
        :param path: Output path.
        :returns: The path written.
        """
        return self.adapter.write(report, path)


def emit_report(report: AuditReport, format_: Optional[str], path: str) -> str:
    r"""Write report in given format.

    .. code-block:: python

        emit_report(report, "csv", "corollary.csv")

    :param report: Audit report.
    :param format\_: ``json`` or ``csv`` (``None`` reads `MARKETLIB_REPORT_FORMAT`).
    :param path: Output path.
    :returns: The path written.
    """
    return ReportManager(format_).write(report, path)


def load_report(path: str) -> AuditReport:
    """Load JSON report written by :func:`emit_report`."""
    with open(path) as f:
        return JsonReport().loads(f.read())
