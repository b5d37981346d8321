import json

import pytest


@pytest.fixture
def gargs(gscenario_data, gscenario_file, tmpdir):
    def make(command, *extra, name="out.json"):
        out = str(tmpdir.join(name))
        return [command, "--config", gscenario_file(gscenario_data), "--out", out, *extra], out
    yield make


def test_audit(gargs):
    from pyfair.marketlib.cli import main
    from pyfair.marketlib.manager import load_report

    argv, out = gargs("audit")
    assert main(argv) == 0

    report = load_report(out)
    assert report.record("statistical_parity")["verdict"] == "pass"
    assert report.record("blatant_unfairness")["verdict"] == "flagged"


def test_audit_csv(gargs):
    from pyfair.marketlib.cli import main

    argv, out = gargs("audit", "--format", "csv", name="out.csv")
    assert main(argv) == 0
    with open(out) as f:
        assert f.readline().startswith("check,target,verdict")


def test_audit_stdout(capsys, gscenario_data, gscenario_file):
    from pyfair.marketlib.cli import main

    assert main(["audit", "--config", gscenario_file(gscenario_data), "--concept", "nash"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["body"]["records"][0]["provenance"]["concept"] == "nash"


def test_enumerate(gargs):
    from pyfair.marketlib.cli import main

    argv, out = gargs("enumerate", "--candidate", "x1")
    assert main(argv) == 0

    with open(out) as f:
        listing = json.load(f)
    assert listing["concept"] == "sce"
    assert listing["count"] == len(listing["members"]) > 0
    assert "flags" not in listing


def test_detect_blatant(gargs):
    from pyfair.marketlib.cli import main

    argv, out = gargs("detect-blatant")
    assert main(argv) == 0

    with open(out) as f:
        listing = json.load(f)
    assert {flag["player"] for flag in listing["flags"]} == {"firm", "x0"}


def test_construct(gargs):
    from pyfair.marketlib.cli import main

    argv, out = gargs("construct")
    assert main(argv) == 0

    with open(out) as f:
        assert json.load(f) == {"x0": [["0", "1"]], "x1": [["0", "1"]]}


def test_construct_without_classifier(gscenario_data, gscenario_file):
    from pyfair.marketlib.cli import main

    del gscenario_data["classifier"]
    assert main(["construct", "--config", gscenario_file(gscenario_data)]) == 2


def test_check_sce(gargs):
    from pyfair.marketlib.cli import main
    from pyfair.marketlib.manager import load_report

    argv, out = gargs("check-sce", "--offer", "3/2", "--candidate", "x1")
    assert main(argv) == 0

    targets = [record["target"] for record in load_report(out).body()["records"]]
    assert targets == ["x1@3/2:nash", "x1@3/2:sce"]


@pytest.mark.parametrize("argv", [
    ["audit"],
    ["audit", "--config", "missing.json"],
    ["reproduce-corollary", "--grid-step", "1"],
    ["reproduce-corollary", "--grid-step", "3/2", "--groups", "7"],
])
def test_config_errors(argv):
    from pyfair.marketlib.cli import main

    assert main(argv) == 2


def test_invalid_scenario(gscenario_data, gscenario_file):
    from pyfair.marketlib.cli import main

    gscenario_data["concept"] = "random"
    assert main(["audit", "--config", gscenario_file(gscenario_data)]) == 2


def test_budget_exceeded(gargs):
    from pyfair.marketlib.cli import main

    argv, _ = gargs("audit", "--budget", "1")
    assert main(argv) == 3


def test_analysis_error_is_not_a_config_error(gscenario_data, gscenario_file):
    from pyfair.marketlib.cli import EXIT_ANALYSIS
    from pyfair.marketlib.cli import main

    # the seed decision is not blatantly unfair, so the construction is refused
    gscenario_data["classifier"] = {
        "kind": "constructed",
        "construction": "sufficiency",
        "seed": {"decision": "3/2", "anchor": "x0"},
    }
    assert main(["construct", "--config", gscenario_file(gscenario_data)]) == EXIT_ANALYSIS == 4


def test_seed_help(capsys):
    from pyfair.marketlib.cli import main

    with pytest.raises(SystemExit):
        main(["audit", "--help"])
    assert "reserved" in capsys.readouterr().out


def test_reproduce_corollary(tmpdir):
    from pyfair.marketlib.cli import main
    from pyfair.marketlib.manager import load_report

    out = str(tmpdir.join("corollary.json"))
    assert main(["reproduce-corollary", "--grid-step", "3/2", "--out", out, "--seed", "7"]) == 0
    assert load_report(out).record("blatant_unfairness")["verdict"] == "flagged"


def test_reproduce_corollary_deviation(monkeypatch, tmpdir):
    from pyfair.marketlib.audit import AuditReport
    from pyfair.marketlib.cli import main

    monkeypatch.setattr("pyfair.marketlib.cli.reproduce_corollary", lambda *args: AuditReport("0" * 64, [], []))
    monkeypatch.setattr("pyfair.marketlib.cli.corollary_deviations", lambda report: ["blatant_unfairness: missing"])

    assert main(["reproduce-corollary", "--out", str(tmpdir.join("out.json"))]) == 1


def test_version(capsys):
    from pyfair.marketlib import __version__
    from pyfair.marketlib.cli import main

    with pytest.raises(SystemExit):
        main(["--version"])
    assert __version__ in capsys.readouterr().out
