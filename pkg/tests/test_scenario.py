import copy
import json
import os
import re
import textwrap
from fractions import Fraction

import pytest


def test_parse_scenario(gscenario_data):
    from pyfair.marketlib.scenario import parse_scenario

    scenario = parse_scenario(gscenario_data)

    assert scenario.spec.offer_grid == (0, Fraction(3, 2), 3)
    assert scenario.population.ids == ("x0", "x1")
    assert scenario.population["x0"].label == 1
    assert scenario.population["x0"].weight == Fraction(1, 2)
    assert scenario.concept == "sce"
    assert scenario.strategy_space == "threshold"
    assert [check["id"] for check in scenario.checks] == ["statistical_parity", "blatant_unfairness"]
    assert scenario.provenance()["grid_step"] == Fraction(3, 2)
    assert scenario.cap is None
    assert scenario.beliefs is None


def test_parse_scenario_overrides(gscenario_data):
    from pyfair.marketlib.scenario import parse_scenario

    scenario = parse_scenario(gscenario_data, {"grid_step": "1/4", "concept": "nash", "budget": None})

    assert len(scenario.spec.offer_grid) == 13
    assert scenario.concept == "nash"
    assert scenario.budget == 250000
    assert scenario.data["market"]["grid_step"] == "1/4"
    # the caller's document is left untouched
    assert gscenario_data["market"]["grid_step"] == "3/2"


def test_grid_step_from_env(monkeypatch, gscenario_data):
    from pyfair.marketlib.scenario import parse_scenario

    monkeypatch.setenv("MARKETLIB_GRID_STEP", "1/2")
    del gscenario_data["market"]["grid_step"]
    assert len(parse_scenario(gscenario_data).spec.offer_grid) == 7


def test_scenario_digest(gscenario_data):
    from pyfair.marketlib.scenario import parse_scenario

    first = parse_scenario(gscenario_data)
    assert first.digest == parse_scenario(copy.deepcopy(gscenario_data)).digest
    assert first.digest != parse_scenario(gscenario_data, {"concept": "nash"}).digest


@pytest.mark.parametrize("path, value, message", [
    (("market", "grid_step"), "0", "Invalid scenario at market.grid_step"),
    (("market", "grid_step"), "0.5", "Invalid scenario at market.grid_step"),
    (("version",), 2, "Invalid scenario at version"),
    (("concept",), "random", "Invalid scenario at concept"),
    (("budget",), 0, "Invalid scenario at budget"),
    (("market", "tie_break"), "random", "Invalid scenario at market.tie_break"),
    (("market", "candidate_outside"), "7/2", "Invalid market"),
    (("market", "firm_outside"), "-1", "Invalid market"),
])
def test_parse_scenario_invalid(gscenario_data, path, value, message):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_scenario

    target = gscenario_data
    for key in path[:-1]:
        target = target[key]
    target[path[-1]] = value

    with pytest.raises(ScenarioError) as exc:
        parse_scenario(gscenario_data)
    assert message in str(exc.value)


def test_unknown_field_rejected(gscenario_data):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["seed"] = 1
    with pytest.raises(ScenarioError):
        parse_scenario(gscenario_data)

    with pytest.raises(ScenarioError):
        parse_scenario([gscenario_data])


def test_population_weights(gscenario_data):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["population"][0]["weight"] = "1/4"
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(gscenario_data)
    assert "every candidate or none" in str(exc.value)

    gscenario_data["population"][1]["weight"] = "1/2"
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(gscenario_data)
    assert "Invalid population" in str(exc.value)

    gscenario_data["population"][1]["weight"] = "3/4"
    scenario = parse_scenario(gscenario_data)
    assert scenario.population["x1"].weight == Fraction(3, 4)


def test_duplicate_features_rejected(gscenario_data):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["population"][1]["features"] = ["0"]
    with pytest.raises(ScenarioError):
        parse_scenario(gscenario_data)


def test_parse_checks(gscenario_data):
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["checks"] = [
        {"id": "group_fairness", "f1": "label", "f2": [
            {"decision": "0", "label": "1", "value": "a"},
            {"decision": "3", "label": "1", "value": "b"},
        ]},
        {"id": "individual_fairness", "metric": {"scale": "2"}},
        {"id": "equilibrium", "offer": "3/2", "candidate": "x1"},
    ]
    group, individual, equilibrium = parse_scenario(gscenario_data).checks

    assert group["group"].second(Fraction(3), Fraction(1)) == "b"
    assert group["group"].first(Fraction(3), "any") == "any"
    assert individual["metric"].scale == 2
    assert equilibrium["offer"] == Fraction(3, 2)
    assert equilibrium["candidate"] == "x1"


@pytest.mark.parametrize("check_id", ["group_fairness", "counterfactual_fairness", "no_taste_based"])
def test_check_payload_required(gscenario_data, check_id):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["checks"] = [{"id": check_id}]
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(gscenario_data)
    assert check_id in str(exc.value)


def test_parse_causal_model(gscenario_data):
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["checks"] = [{"id": "no_taste_based", "scm": {
        "parents": {"A": ["U"], "X": ["U"], "D": ["X", "A"]},
        "functions": {
            "A": [{"inputs": ["0"], "value": "a"}, {"inputs": ["1"], "value": "b"}],
            "X": [{"inputs": ["0"], "value": "0"}, {"inputs": ["1"], "value": "1"}],
        },
        "noise": {"U": [{"value": "0", "probability": "1/2"}, {"value": "1", "probability": "1/2"}]},
        "features": ["X"],
    }}]
    scm = parse_scenario(gscenario_data).checks[0]["scm"]

    assert scm.sensitive_values() == ("a", "b")
    assert scm.graph.has_edge("A", "D")


def test_parse_causal_model_invalid(gscenario_data):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["checks"] = [{"id": "no_taste_based", "scm": {
        "parents": {"A": ["X"], "X": ["A"], "D": ["X"]},
        "functions": {"A": [], "X": []},
        "noise": {},
        "features": ["X"],
    }}]
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(gscenario_data)
    assert "Invalid causal model at checks.0.scm" in str(exc.value)


@pytest.mark.parametrize("beliefs, expected", [
    ({"preset": "prop1", "offer": "3/2"}, (3, Fraction(3, 2), Fraction(3, 2), 3, Fraction(3, 2), Fraction(3, 2))),
    ({"preset": "prop2"}, (0, 0, 0, 0, 0, 0)),
    ({"preset": "market_never_plays", "o_f_f": "1", "o_f_x": "2", "o_x_x": "1"}, (1, 2, 1, 3, 1, 1)),
    ({"o_f_f": "3", "o_f_x": "0", "o_x_x": "0", "threshold": "3/2"}, (3, 0, 0, 3, Fraction(3, 2), 0)),
])
def test_parse_beliefs(gscenario_data, beliefs, expected):
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["beliefs"] = beliefs
    assert tuple(parse_scenario(gscenario_data).beliefs) == expected


@pytest.mark.parametrize("beliefs", [
    {"preset": "market_never_plays", "o_f_f": "1"},
    {"o_f_f": "4", "o_f_x": "0", "o_x_x": "0"},
])
def test_parse_beliefs_invalid(gscenario_data, beliefs):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["beliefs"] = beliefs
    with pytest.raises(ScenarioError):
        parse_scenario(gscenario_data)


def test_parse_cap(gscenario_data):
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["cap"] = {"jobs": 1}
    assert parse_scenario(gscenario_data).cap == {"jobs": 1, "offers": (0, Fraction(3, 2))}

    gscenario_data["cap"] = {"jobs": 1, "offers": ["0", "3"]}
    assert parse_scenario(gscenario_data).cap["offers"] == (0, 3)


@pytest.mark.parametrize("config, expected", [
    ({"kind": "constant", "decision": "3/2"}, {"x0": {Fraction(3, 2): 1}, "x1": {Fraction(3, 2): 1}}),
    ({"kind": "constant", "decision": {"0": "1/2", "3": "1/2"}}, {"x0": {0: Fraction(1, 2), 3: Fraction(1, 2)}, "x1": {0: Fraction(1, 2), 3: Fraction(1, 2)}}),
    ({"kind": "table", "decisions": {"x0": "3"}, "default": "0"}, {"x0": {3: 1}, "x1": {0: 1}}),
])
def test_parse_classifier(gscenario_data, config, expected):
    from pyfair.marketlib.game.strategy import Distribution
    from pyfair.marketlib.scenario import parse_classifier
    from pyfair.marketlib.scenario import parse_scenario

    scenario = parse_scenario(gscenario_data)
    classifier = parse_classifier(config)
    assert classifier.decisions(scenario.population) == {k: Distribution(v) for k, v in expected.items()}


def test_parse_classifier_invalid():
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_classifier

    with pytest.raises(ScenarioError):
        parse_classifier({"kind": "constant"})

    with pytest.raises(ScenarioError):
        parse_classifier({"kind": "constant", "decision": {"0": "1/2"}})

    assert parse_classifier({"kind": "constructed", "construction": "constant"}) is None


def test_load_scenario(gscenario_data, gscenario_file):
    from pyfair.marketlib.scenario import load_scenario

    scenario = load_scenario(gscenario_file(gscenario_data), {"concept": "nash"})
    assert scenario.concept == "nash"


def test_load_scenario_invalid(tmpdir):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import load_scenario

    with pytest.raises(ScenarioError) as exc:
        load_scenario(str(tmpdir.join("missing.json")))
    assert "Unable to read scenario" in str(exc.value)

    broken = tmpdir.join("broken.json")
    broken.write("{")
    with pytest.raises(ScenarioError) as exc:
        load_scenario(str(broken))
    assert "Unable to parse scenario" in str(exc.value)


def test_schema_is_serializable():
    from pyfair.marketlib.scenario import SCENARIO_SCHEMA

    assert json.loads(json.dumps(SCENARIO_SCHEMA))["required"] == ["version", "market", "population"]


@pytest.mark.parametrize("concept, belief_space, expected", [
    ("sce", None, "point-mass grid"),
    ("nash", None, "correct beliefs"),
    ("sce", "correct", "correct beliefs"),
    ("nash", "correct", "correct beliefs"),
])
def test_parse_belief_space(gscenario_data, concept, belief_space, expected):
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["concept"] = concept
    if belief_space:
        gscenario_data["belief_space"] = belief_space
    scenario = parse_scenario(gscenario_data)

    assert scenario.provenance()["belief_space"] == expected
    assert scenario.searched_concept == ("sce" if expected == "point-mass grid" else "nash")


@pytest.mark.parametrize("concept, belief_space", [
    ("nash", "point-mass"),
    ("sce", "mixed"),
])
def test_parse_belief_space_invalid(gscenario_data, concept, belief_space):
    from pyfair.marketlib.scenario import ScenarioError
    from pyfair.marketlib.scenario import parse_scenario

    gscenario_data["concept"] = concept
    gscenario_data["belief_space"] = belief_space
    with pytest.raises(ScenarioError):
        parse_scenario(gscenario_data)


def _documented_scenarios():
    docs = os.path.join(os.path.dirname(__file__), os.pardir, "docs")
    found = []
    for name in sorted(os.listdir(docs)):
        if not name.endswith(".rst"):
            continue
        with open(os.path.join(docs, name)) as f:
            text = f.read()
        for block in re.findall(r"\.\. code-block:: json\n\n((?:(?: {4}.*)?\n)+)", text):
            found.append(pytest.param(textwrap.dedent(block), id=f"{name}:{len(found)}"))
    return found


@pytest.mark.parametrize("text", _documented_scenarios())
def test_documented_scenarios(text):
    from pyfair.marketlib.scenario import parse_scenario

    scenario = parse_scenario(json.loads(text))
    assert scenario.checks
