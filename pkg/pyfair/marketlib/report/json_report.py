"""This module contains the schema-versioned JSON report adapter."""

from __future__ import annotations

import json

from pyfair.marketlib.audit import AuditReport
from pyfair.marketlib.report.base_report import BaseReport


class JsonReport(BaseReport):
    """Write reports as JSON.

    The document holds the deterministic ``body``, its ``digest`` and the
    ``timing`` of the run. Keys are sorted so equal bodies serialize to
    equal bytes.
    """

    type = "json"
    extension = ".json"

    def dumps(self, report: AuditReport) -> str:
        return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"

    def loads(self, text: str) -> AuditReport:
        """Read a report written by :meth:`dumps`."""
        return AuditReport.from_dict(json.loads(text))
