import csv
import json

import pytest


class GAdapter(object):
    def dumps(self, report):
        return "DUMPS"

    def write(self, report, path):
        return path


@pytest.fixture
def greport(gscenario_data):
    from pyfair.marketlib.audit import run_audit
    from pyfair.marketlib.scenario import parse_scenario

    yield run_audit(parse_scenario(gscenario_data))


@pytest.mark.parametrize("format_, adapter_cls", [
    ("json", "JsonReport"),
    ("csv", "CsvReport"),
])
def test_report_manager(format_, adapter_cls):
    from pyfair.marketlib.manager import ReportManager

    manager = ReportManager(format_)
    assert manager.adapter.__class__.__name__ == adapter_cls


def test_report_manager_from_env(monkeypatch):
    from pyfair.marketlib.manager import ReportManager

    monkeypatch.setenv("MARKETLIB_REPORT_FORMAT", "csv")
    assert ReportManager().adapter.__class__.__name__ == "CsvReport"


def test_report_manager_invalid():
    from pyfair.marketlib.manager import ReportManager

    with pytest.raises(ValueError):
        ReportManager("xml")


def test_report_manager_methods(greport):
    from pyfair.marketlib.manager import ReportManager

    gadapter = GAdapter()
    manager = ReportManager("json")
    manager.adapter = gadapter

    assert manager.dumps(greport) == gadapter.dumps(greport)
    assert manager.write(greport, "report.json") == "report.json"


def test_emit_json_report(tmpdir, greport):
    from pyfair.marketlib.manager import emit_report
    from pyfair.marketlib.manager import load_report

    path = emit_report(greport, "json", str(tmpdir.join("report.json")))
    loaded = load_report(path)

    assert loaded.body() == greport.body()
    assert loaded.digest == greport.digest

    data = json.loads(tmpdir.join("report.json").read())
    assert sorted(data) == ["body", "digest", "timing"]
    assert data["body"]["schema_version"] == 1


def test_emit_csv_report(tmpdir, greport):
    from pyfair.marketlib.manager import emit_report
    from pyfair.marketlib.report.csv_report import COLUMNS

    path = emit_report(greport, "csv", str(tmpdir.join("report.csv")))
    with open(path, newline="") as f:
        rows = list(csv.reader(f))

    assert tuple(rows[0]) == COLUMNS + ("scenario_digest",)
    assert len(rows) == 1 + len(greport.records)
    assert [row[0] for row in rows[1:]] == ["statistical_parity", "blatant_unfairness"]
    assert {row[-1] for row in rows[1:]} == {greport.scenario_digest}
    assert json.loads(rows[2][4])["grid_step"] == "3/2"
