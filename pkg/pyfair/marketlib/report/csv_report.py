"""This module contains the CSV report adapter flattening check records."""

from __future__ import annotations

import csv
import io

from pyfair.marketlib.report.base_report import BaseReport
from pyfair.marketlib.utils import canonical_json

#: Columns of the CSV report; nested fields are written as canonical JSON.
COLUMNS = (
    "check",
    "target",
    "verdict",
    "witness",
    "provenance",
    "values",
)


class CsvReport(BaseReport):
    """Write one row per check record."""

    type = "csv"
    extension = ".csv"

    def dumps(self, report) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(COLUMNS + ("scenario_digest",))
        body = report.body()
        for record in body["records"]:
            row = [record["check"], record["target"], record["verdict"]]
            row += [canonical_json(record[column]) for column in COLUMNS[3:]]
            writer.writerow(row + [body["scenario_digest"]])
        return buffer.getvalue()
