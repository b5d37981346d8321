"""This module contains loading and validation of scenario files.

A scenario is a JSON document validated against :data:`SCENARIO_SCHEMA`
before anything is computed. Every number is written as a ``p/q`` string.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from typing import (
    Any,
    Mapping,
    Optional,
)

import jsonschema

from pyfair.marketlib.constants import (
    BELIEF_PRESETS,
    BELIEF_SPACES,
    CHECK_IDS,
    CONSTRUCTIONS,
    SCENARIO_VERSION,
    SOLUTION_CONCEPTS,
    STRATEGY_SPACES,
    TIE_BREAKS,
)
from pyfair.marketlib.fairness.causal import (
    CausalModelError,
    StructuralCausalModel,
)
from pyfair.marketlib.fairness.group import (
    GroupFairnessSpec,
    constant,
    decision_of,
    label_of,
)
from pyfair.marketlib.fairness.individual import MetricPair
from pyfair.marketlib.fairness.population import (
    Candidate,
    Classifier,
    FairnessError,
    Population,
)
from pyfair.marketlib.game.strategy import (
    Distribution,
    DistributionError,
)
from pyfair.marketlib.market.propositions import (
    market_never_plays_beliefs,
    prop1_beliefs,
    prop2_beliefs,
)
from pyfair.marketlib.market.spec import (
    MarketError,
    MarketSpec,
    OutsideOptionBeliefs,
)
from pyfair.marketlib.settings import (
    get_budget,
    get_concept,
    get_grid_step,
    get_search_budget,
    get_strategy_space,
)
from pyfair.marketlib.utils import (
    as_scalar,
    digest,
    to_rational,
)

logger = logging.getLogger(__name__)


class ScenarioError(ValueError):
    """Class to mark scenario files that cannot be parsed or validated."""

    pass


_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_POSITIVE = {"type": "string", "pattern": r"^0*[1-9]\d*(/0*[1-9]\d*)?$"}
_SCALAR = {"type": ["string", "integer"]}
_DECISION = {
    "oneOf": [
        _RATIONAL,
        {"type": "object", "minProperties": 1, "additionalProperties": _RATIONAL},
    ],
}
_PER_CANDIDATE = {
    "oneOf": [
        _RATIONAL,
        {"type": "object", "additionalProperties": _RATIONAL},
    ],
}
_FEATURE = {
    "oneOf": [
        {"type": "string", "enum": ["decision", "label", "constant"]},
        {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["decision", "label", "value"],
                "properties": {"decision": _RATIONAL, "label": _SCALAR, "value": _SCALAR},
                "additionalProperties": False,
            },
        },
    ],
}
_METRIC = {
    "type": "object",
    "properties": {
        "scale": _RATIONAL,
        "candidate_table": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x", "y", "value"],
                "properties": {"x": {"type": "string"}, "y": {"type": "string"}, "value": _RATIONAL},
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}
_SCM = {
    "type": "object",
    "required": ["parents", "functions", "noise", "features"],
    "properties": {
        "parents": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "string"}}},
        "functions": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["inputs", "value"],
                    "properties": {"inputs": {"type": "array", "items": _SCALAR}, "value": _SCALAR},
                    "additionalProperties": False,
                },
            },
        },
        "noise": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["value", "probability"],
                    "properties": {"value": _SCALAR, "probability": _RATIONAL},
                    "additionalProperties": False,
                },
            },
        },
        "features": {"type": "array", "items": {"type": "string"}},
        "sensitive": {"type": "string"},
        "decision": {"type": "string"},
    },
    "additionalProperties": False,
}

#: Published JSON schema of scenario files.
SCENARIO_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "marketlib scenario",
    "type": "object",
    "required": ["version", "market", "population"],
    "properties": {
        "version": {"const": SCENARIO_VERSION},
        "market": {
            "type": "object",
            "properties": {
                "grid_step": _POSITIVE,
                "firm_offers": {"type": "array", "minItems": 1, "items": _RATIONAL},
                "firm_outside": _RATIONAL,
                "candidate_outside": _PER_CANDIDATE,
                "surplus": _PER_CANDIDATE,
                "need_penalty": _RATIONAL,
                "tie_break": {"enum": list(TIE_BREAKS)},
            },
            "additionalProperties": False,
        },
        "population": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "features", "sensitive", "label"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "features": {"type": "array", "items": _RATIONAL},
                    "sensitive": _SCALAR,
                    "label": _SCALAR,
                    "weight": _POSITIVE,
                },
                "additionalProperties": False,
            },
        },
        "classifier": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["constant", "table", "constructed"]},
                "decision": _DECISION,
                "decisions": {"type": "object", "additionalProperties": _DECISION},
                "default": _DECISION,
                "construction": {"enum": list(CONSTRUCTIONS)},
                "seed": {
                    "type": "object",
                    "required": ["decision", "anchor"],
                    "properties": {"decision": _DECISION, "anchor": {"type": "string"}},
                    "additionalProperties": False,
                },
                "f1": _FEATURE,
                "f2": _FEATURE,
                "decision_set": {"type": "array", "minItems": 1, "items": _RATIONAL},
            },
            "additionalProperties": False,
        },
        "beliefs": {
            "type": "object",
            "properties": {
                "preset": {"enum": list(BELIEF_PRESETS)},
                "offer": _RATIONAL,
                "o_f_f": _RATIONAL,
                "o_f_x": _RATIONAL,
                "o_x_x": _RATIONAL,
                "o_x_f": _RATIONAL,
                "threshold": _RATIONAL,
                "believed_offer": _RATIONAL,
            },
            "additionalProperties": False,
        },
        "concept": {"enum": list(SOLUTION_CONCEPTS)},
        "strategy_space": {"enum": list(STRATEGY_SPACES)},
        "belief_space": {"enum": list(BELIEF_SPACES)},
        "budget": {"type": "integer", "minimum": 1},
        "search_budget": {"type": "integer", "minimum": 1},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id"],
                "properties": {
                    "id": {"enum": list(CHECK_IDS)},
                    "f1": _FEATURE,
                    "f2": _FEATURE,
                    "metric": _METRIC,
                    "scm": _SCM,
                    "offer": _RATIONAL,
                    "candidate": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "cap": {
            "type": "object",
            "required": ["jobs"],
            "properties": {
                "jobs": {"type": "integer", "minimum": 0},
                "offers": {"type": "array", "minItems": 1, "items": _RATIONAL},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

_FEATURE_PRESETS = {"decision": decision_of, "label": label_of, "constant": constant}


class Scenario:
    """Validated scenario.

    :param data: Scenario document (after overrides), kept for the digest.
    """

    def __init__(self, data: Mapping[str, Any]):
        self.data = dict(data)
        self.digest = digest(self.data)

        self.spec = _parse_spec(self.data.get("market", {}))
        self.population = _parse_population(self.data["population"])
        self.firm_offers = tuple(_rational(v, "market.firm_offers") for v in self.data.get("market", {}).get("firm_offers", ())) or None
        self.classifier = self.data.get("classifier")
        self.beliefs = _parse_beliefs(self.data.get("beliefs"), self.spec, self.population)
        self.concept = self.data.get("concept") or get_concept()
        self.strategy_space = self.data.get("strategy_space") or get_strategy_space()
        self.belief_space = self.data.get("belief_space") or ("point-mass" if self.concept == "sce" else "correct")
        if self.concept == "nash" and self.belief_space != "correct":
            raise ScenarioError(f"Belief space {self.belief_space} needs concept sce")
        self.budget = self.data.get("budget") or get_budget()
        self.search_budget = self.data.get("search_budget") or get_search_budget()
        self.checks = [_parse_check(check, i) for i, check in enumerate(self.data.get("checks", []))]
        self.cap = _parse_cap(self.data.get("cap"))

    @property
    def grid_step(self) -> Fraction:
        return to_rational(self.data.get("market", {}).get("grid_step", get_grid_step()))

    @property
    def searched_concept(self) -> str:
        """Concept enumerated; SCE under correct beliefs is Nash equilibrium."""
        return "nash" if self.belief_space == "correct" else self.concept

    def provenance(self) -> dict:
        return {
            "concept": self.concept,
            "strategy_space": self.strategy_space,
            "grid_step": self.grid_step,
            "belief_space": "point-mass grid" if self.belief_space == "point-mass" else "correct beliefs",
        }


def _rational(value: Any, path: str) -> Fraction:
    try:
        return to_rational(value)
    except ValueError as exc:
        raise ScenarioError(f"Invalid rational at {path}: {exc}")


def parse_decision(value: Any, path: str) -> Distribution:
    """Parse a decision given as a rational or a mapping of rational to probability."""
    try:
        if isinstance(value, Mapping):
            return Distribution({_rational(k, path): _rational(p, path) for k, p in value.items()})
        return Distribution.point(_rational(value, path))
    except DistributionError as exc:
        raise ScenarioError(f"Invalid decision distribution at {path}: {exc}")


def _per_candidate(value: Any, path: str) -> Any:
    if isinstance(value, Mapping):
        return {None if k == "default" else k: _rational(v, f"{path}.{k}") for k, v in value.items()}
    return _rational(value, path)


def _parse_spec(market: Mapping) -> MarketSpec:
    kwargs = {}
    if "firm_outside" in market:
        kwargs["firm_outside"] = _rational(market["firm_outside"], "market.firm_outside")
    for field in ("candidate_outside", "surplus"):
        if field in market:
            kwargs[field] = _per_candidate(market[field], f"market.{field}")
    if "need_penalty" in market:
        kwargs["need_penalty"] = _rational(market["need_penalty"], "market.need_penalty")
    if "tie_break" in market:
        kwargs["tie_break"] = market["tie_break"]

    step = market.get("grid_step", get_grid_step())
    try:
        return MarketSpec.from_step(step, **kwargs)
    except MarketError as exc:
        raise ScenarioError(f"Invalid market: {exc}")


def _parse_population(rows: list) -> Population:
    weighted = [row for row in rows if "weight" in row]
    if weighted and len(weighted) != len(rows):
        raise ScenarioError("Invalid population: weights must be given for every candidate or none")

    try:
        if not weighted:
            return Population.uniform(
                (row["id"], tuple(_rational(f, f"population.{i}.features") for f in row["features"]), as_scalar(row["sensitive"]), as_scalar(row["label"]))
                for i, row in enumerate(rows)
            )
        return Population(
            Candidate(
                row["id"],
                tuple(_rational(f, f"population.{i}.features") for f in row["features"]),
                as_scalar(row["sensitive"]),
                as_scalar(row["label"]),
                _rational(row["weight"], f"population.{i}.weight"),
            )
            for i, row in enumerate(rows)
        )
    except FairnessError as exc:
        raise ScenarioError(f"Invalid population: {exc}")


def parse_classifier(config: Mapping, path: str = "classifier") -> Optional[Classifier]:
    """Parse ``constant`` and ``table`` classifiers; constructed ones return ``None``."""
    kind = config["kind"]
    if kind == "constant":
        if "decision" not in config:
            raise ScenarioError(f"Missing {path}.decision")
        return Classifier.constant(parse_decision(config["decision"], f"{path}.decision"))
    if kind == "table":
        decisions = {k: parse_decision(v, f"{path}.decisions.{k}") for k, v in config.get("decisions", {}).items()}
        default = parse_decision(config["default"], f"{path}.default") if "default" in config else None
        return Classifier(decisions, default)
    return None


def parse_feature(value: Any, path: str) -> Any:
    """Parse an ``F1``/``F2`` preset name or table."""
    if isinstance(value, str):
        return _FEATURE_PRESETS[value]
    table = {}
    for i, row in enumerate(value):
        key = (_rational(row["decision"], f"{path}.{i}.decision"), as_scalar(row["label"]))
        table[key] = as_scalar(row["value"])
    return table


def _parse_metric(config: Mapping, path: str) -> MetricPair:
    table = None
    if "candidate_table" in config:
        table = {
            (row["x"], row["y"]): _rational(row["value"], f"{path}.candidate_table.{i}.value")
            for i, row in enumerate(config["candidate_table"])
        }
    return MetricPair(candidate_metric=table, scale=_rational(config.get("scale", "1"), f"{path}.scale"))


def _parse_scm(config: Mapping, path: str) -> StructuralCausalModel:
    functions = {
        node: {tuple(as_scalar(v) for v in row["inputs"]): as_scalar(row["value"]) for row in rows}
        for node, rows in config["functions"].items()
    }
    try:
        noise = {
            node: Distribution({as_scalar(row["value"]): _rational(row["probability"], f"{path}.noise.{node}") for row in rows})
            for node, rows in config["noise"].items()
        }
        return StructuralCausalModel(
            parents=config["parents"],
            functions=functions,
            noise=noise,
            features=config["features"],
            sensitive=config.get("sensitive", "A"),
            decision=config.get("decision", "D"),
        )
    except (CausalModelError, DistributionError) as exc:
        raise ScenarioError(f"Invalid causal model at {path}: {exc}")


def _parse_check(check: Mapping, index: int) -> dict:
    path = f"checks.{index}"
    parsed = {"id": check["id"]}
    if "f1" in check or "f2" in check:
        parsed["group"] = GroupFairnessSpec(
            parse_feature(check.get("f1", "decision"), f"{path}.f1"),
            parse_feature(check.get("f2", "constant"), f"{path}.f2"),
        )
    if "metric" in check:
        parsed["metric"] = _parse_metric(check["metric"], f"{path}.metric")
    if "scm" in check:
        parsed["scm"] = _parse_scm(check["scm"], f"{path}.scm")
    if "offer" in check:
        parsed["offer"] = _rational(check["offer"], f"{path}.offer")
    if "candidate" in check:
        parsed["candidate"] = check["candidate"]

    needs = {"group_fairness": "group", "counterfactual_fairness": "scm", "no_taste_based": "scm"}
    required = needs.get(check["id"])
    if required and required not in parsed:
        raise ScenarioError(f"Check {check['id']} at {path} needs its {'f1/f2 tables' if required == 'group' else required} payload")
    return parsed


def _parse_beliefs(config: Optional[Mapping], spec: MarketSpec, population: Population) -> Optional[OutsideOptionBeliefs]:
    if not config:
        return None
    values = {k: _rational(v, f"beliefs.{k}") for k, v in config.items() if k != "preset"}
    preset = config.get("preset")
    try:
        if preset == "prop1":
            return prop1_beliefs(values.get("offer", 0))
        if preset == "prop2":
            candidate = population.ids[0]
            return prop2_beliefs(spec.market_action(candidate), values.get("offer", spec.firm_outside))
        if preset == "market_never_plays":
            return market_never_plays_beliefs(values["o_f_f"], values["o_f_x"], values["o_x_x"], values.get("o_x_f", 3))
        return OutsideOptionBeliefs.create(
            values["o_f_f"], values["o_f_x"], values["o_x_x"], values.get("o_x_f", 3),
            threshold=values.get("threshold"), believed_offer=values.get("believed_offer"),
        )
    except KeyError as exc:
        raise ScenarioError(f"Missing beliefs.{exc.args[0]}")
    except MarketError as exc:
        raise ScenarioError(f"Invalid beliefs: {exc}")


def _parse_cap(config: Optional[Mapping]) -> Optional[dict]:
    if not config:
        return None
    offers = config.get("offers", ["0", "3/2"])
    return {"jobs": config["jobs"], "offers": tuple(_rational(v, "cap.offers") for v in offers)}


def parse_scenario(data: Any, overrides: Optional[Mapping[str, Any]] = None) -> Scenario:
    """Validate a scenario document and build a :class:`Scenario`.

    :param data: Decoded JSON document.
    :param overrides: Values taking precedence over the file; ``grid_step``
        goes to the market section, ``None`` values are ignored.
    :raises ScenarioError: Schema violation, bad rational or out-of-range value.
    """
    if not isinstance(data, dict):
        raise ScenarioError("Scenario must be a JSON object")
    data = json.loads(json.dumps(data))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "grid_step":
            data.setdefault("market", {})["grid_step"] = str(value)
        else:
            data[key] = value

    try:
        jsonschema.validate(instance=data, schema=SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"Invalid scenario at {path}: {exc.message}")
    return Scenario(data)


def load_scenario(path: str, overrides: Optional[Mapping[str, Any]] = None) -> Scenario:
    """Load and validate a scenario file.

    .. code-block:: python

        scenario = load_scenario("corollary.json")
        len(scenario.spec.offer_grid)  # 13 with grid step 1/4

    :param path: Path to JSON file.
    :param overrides: See :func:`parse_scenario`.
    :returns: An instance of :class:`Scenario`.
    """
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as exc:
        raise ScenarioError(f"Unable to read scenario {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"Unable to parse scenario {path}: {exc}")
    logger.info(f"Loaded scenario {path}")
    return parse_scenario(data, overrides)
