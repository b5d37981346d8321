"""This module contains the audit runner composing every check of a scenario."""

from __future__ import annotations

import logging
import time
from functools import cached_property
from fractions import Fraction
from typing import (
    Any,
    NamedTuple,
    Optional,
)

from pyfair.marketlib.blatant import (
    EquilibriumSet,
    Flag,
    Member,
    blatant_flags,
)
from pyfair.marketlib.constants import (
    FIRM,
    REPORT_SCHEMA_VERSION,
    SCENARIO_VERSION,
)
from pyfair.marketlib.constructors import (
    HypothesisError,
    UnfairSeed,
    construct_constant,
    construct_group_fair_blatant,
    construct_sufficiency_blatant,
    validate_seed,
)
from pyfair.marketlib.equilibrium.beliefs import Beliefs
from pyfair.marketlib.equilibrium.checks import (
    FailureWitness,
    check_nash,
    check_sce,
)
from pyfair.marketlib.equilibrium.search import find_sce_witness
from pyfair.marketlib.fairness.causal import (
    check_counterfactual_fairness,
    check_no_taste_based,
)
from pyfair.marketlib.fairness.group import (
    check_equalized_odds,
    check_group_fairness,
    check_statistical_parity,
    check_sufficiency,
)
from pyfair.marketlib.fairness.individual import check_individual_fairness
from pyfair.marketlib.fairness.population import Classifier
from pyfair.marketlib.game.strategy import (
    BehaviorStrategy,
    Distribution,
    MixedStrategy,
    PureStrategy,
    StrategyProfile,
)
from pyfair.marketlib.market.bilateral import build_bilateral_market
from pyfair.marketlib.market.diagnostics import (
    becker_test,
    classifier_outcome,
    is_equilibrium_strategy,
    statistical_discrimination_check,
)
from pyfair.marketlib.market.policies import (
    firm_offer,
    market_strategy_sets,
    threshold_policy,
)
from pyfair.marketlib.market.propositions import market_belief_grid
from pyfair.marketlib.market.simultaneous import apply_job_cap
from pyfair.marketlib.scenario import (
    Scenario,
    ScenarioError,
    parse_classifier,
    parse_decision,
    parse_feature,
    parse_scenario,
)
from pyfair.marketlib.utils import (
    digest,
    format_rational,
    jsonable,
    offer_grid,
    to_rational,
)

logger = logging.getLogger(__name__)

_CLASSIFIER_CHECKS = {
    "statistical_parity",
    "equalized_odds",
    "sufficiency",
    "group_fairness",
    "individual_fairness",
    "counterfactual_fairness",
    "statistical_discrimination",
    "becker",
    "equilibrium_strategy",
}


def describe(value: Any) -> Any:
    """Convert game objects (profiles, strategies, beliefs, flags) into plain data."""
    if isinstance(value, StrategyProfile):
        return {player: describe(s) for player, s in value.strategies.items()}
    if isinstance(value, MixedStrategy):
        return {"mixed": describe(value.distribution)}
    if isinstance(value, (PureStrategy, BehaviorStrategy)):
        return {str(k): describe(v) for k, v in value.as_dict().items()}
    if isinstance(value, Distribution):
        return [[describe(outcome), prob] for outcome, prob in value.items()]
    if isinstance(value, Beliefs):
        return {opponent: describe(c) for opponent, c in value.components.items()}
    if isinstance(value, Member):
        data = {"profile": describe(value.profile), "payoffs": dict(value.payoffs)}
        if value.beliefs:
            data["beliefs"] = {player: describe(b) for player, b in value.beliefs.items()}
        return data
    if isinstance(value, Flag):
        return {
            "index": value.index,
            "player": value.player,
            "equilibrium": describe(value.member),
            "witness": describe(value.witness),
        }
    if isinstance(value, FailureWitness):
        return value.to_dict()
    if isinstance(value, dict):
        return {k: describe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [describe(v) for v in value]
    return value


class CheckRecord(NamedTuple):
    """Outcome of one requested check.

    ``verdict`` is ``pass`` or ``fail`` for fairness and equilibrium checks
    and ``flagged``, ``clear`` or ``not_flagged_within_search`` for blatant
    unfairness; ``clear`` is only reported for Nash sets, which are
    exhaustive. ``fail`` and ``flagged`` always carry a witness.
    """

    check: str
    target: str
    verdict: str
    witness: Any
    provenance: dict
    values: Any = None

    def to_dict(self) -> dict:
        return jsonable({
            "check": self.check,
            "target": self.target,
            "verdict": self.verdict,
            "witness": describe(self.witness),
            "provenance": self.provenance,
            "values": describe(self.values),
        })


class AuditReport:
    """Result of :func:`run_audit`.

    The body (everything but ``timing``) is deterministic; its digest is
    stable across runs of the same scenario.

    :param scenario_digest: Digest of the validated scenario.
    :param records: Check records in request order.
    :param equilibria: Equilibrium listings of the games enumerated.
    :param timing: Wall-clock information, kept out of the body.
    """

    def __init__(self, scenario_digest: str, records: list, equilibria: list, timing: Optional[dict] = None):
        self.scenario_digest = scenario_digest
        self.records = list(records)
        self.equilibria = list(equilibria)
        self.timing = timing or {}

    def body(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "scenario_digest": self.scenario_digest,
            "records": [r.to_dict() if isinstance(r, CheckRecord) else r for r in self.records],
            "equilibria": jsonable(self.equilibria),
        }

    @property
    def digest(self) -> str:
        return digest(self.body())

    def record(self, check: str, target: Optional[str] = None) -> dict:
        """Get the first record of a check (and target); raises ``KeyError`` when missing."""
        for record in self.body()["records"]:
            if record["check"] == check and (target is None or record["target"] == target):
                return record
        raise KeyError(check)

    def to_dict(self) -> dict:
        return {"body": self.body(), "digest": self.digest, "timing": self.timing}

    @classmethod
    def from_dict(cls, data: dict) -> AuditReport:
        body = data["body"]
        return cls(body["scenario_digest"], body["records"], body["equilibria"], data.get("timing"))


def _verdict(holds: bool) -> str:
    return "pass" if holds else "fail"


class _Auditor:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.spec = scenario.spec
        self.population = scenario.population
        self.listings: list = []
        self._games: dict = {}
        self._eqsets: dict = {}

    def provenance(self, **extra) -> dict:
        return {**self.scenario.provenance(), **extra}

    def bilateral(self, candidate: str):
        if candidate not in self._games:
            self._games[candidate] = build_bilateral_market(self.spec, candidate, self.scenario.firm_offers)
        return self._games[candidate]

    def belief_space(self, game):
        return market_belief_grid(game) if self.scenario.belief_space == "point-mass" else None

    def equilibria(self, game, name: str) -> EquilibriumSet:
        if name not in self._eqsets:
            eqset = EquilibriumSet.enumerate(
                game,
                self.scenario.searched_concept,
                self.belief_space(game),
                self.scenario.budget,
                market_strategy_sets(game, self.scenario.strategy_space),
                self.scenario.search_budget,
            )
            self._eqsets[name] = eqset
            self.list_equilibria(name, eqset)
        return self._eqsets[name]

    def list_equilibria(self, name: str, eqset: EquilibriumSet) -> None:
        self.listings.append({
            "game": name,
            "concept": eqset.concept,
            "belief_space": eqset.belief_space,
            "count": len(eqset),
            "members": [describe(m) for m in eqset],
        })

    @cached_property
    def classifier(self) -> Optional[Classifier]:
        config = self.scenario.classifier
        if not config:
            return None
        classifier = parse_classifier(config)
        if classifier is not None:
            return classifier

        construction = config.get("construction")
        if construction is None or "seed" not in config:
            raise ScenarioError("Constructed classifier needs classifier.construction and classifier.seed")
        seed_config = config["seed"]
        seed = UnfairSeed.create(parse_decision(seed_config["decision"], "classifier.seed.decision"), seed_config["anchor"])
        if construction == "constant":
            return construct_constant(seed.strategy)

        if seed.anchor not in self.population.ids:
            raise ScenarioError(f"Seed anchor {seed.anchor} is not in the population")
        decisions = config.get("decision_set")
        if decisions is not None:
            decisions = [to_rational(d) for d in decisions]
        else:
            decisions = self.scenario.firm_offers or self.spec.offer_grid

        game = self.bilateral(seed.anchor)
        eqset = self.equilibria(game, f"bilateral:{seed.anchor}")
        logger.info(f"Constructing {construction} classifier anchored on {seed.anchor}")
        if construction == "group_fair":
            f1 = parse_feature(config.get("f1", "decision"), "classifier.f1")
            return construct_group_fair_blatant(f1, self.population, seed, decisions, game, eqset)
        f2 = parse_feature(config.get("f2", "decision"), "classifier.f2")
        return construct_sufficiency_blatant(f2, self.population, seed, decisions, game, eqset)

    def run(self, check: dict) -> list[CheckRecord]:
        check_id = check["id"]
        if check_id in _CLASSIFIER_CHECKS and self.classifier is None:
            raise ScenarioError(f"Check {check_id} needs a classifier")
        logger.debug(f"Running check {check_id}")
        return getattr(self, f"check_{check_id}")(check)

    def _fairness(self, check_id: str, verdict, target: str = "classifier") -> list[CheckRecord]:
        return [CheckRecord(check_id, target, _verdict(verdict.holds), verdict.witness, self.provenance())]

    def check_statistical_parity(self, check: dict) -> list[CheckRecord]:
        return self._fairness("statistical_parity", check_statistical_parity(self.population, self.classifier))

    def check_equalized_odds(self, check: dict) -> list[CheckRecord]:
        return self._fairness("equalized_odds", check_equalized_odds(self.population, self.classifier))

    def check_sufficiency(self, check: dict) -> list[CheckRecord]:
        return self._fairness("sufficiency", check_sufficiency(self.population, self.classifier))

    def check_group_fairness(self, check: dict) -> list[CheckRecord]:
        spec = check["group"]
        return self._fairness("group_fairness", check_group_fairness(self.population, self.classifier, spec), spec.name)

    def check_individual_fairness(self, check: dict) -> list[CheckRecord]:
        verdict = check_individual_fairness(self.population, self.classifier, check.get("metric"))
        return self._fairness("individual_fairness", verdict)

    def check_counterfactual_fairness(self, check: dict) -> list[CheckRecord]:
        verdict = check_counterfactual_fairness(check["scm"], self.classifier, self.population)
        return self._fairness("counterfactual_fairness", verdict)

    def check_no_taste_based(self, check: dict) -> list[CheckRecord]:
        return self._fairness("no_taste_based", check_no_taste_based(check["scm"]), "causal_model")

    def _diagnostic(self, check_id: str, verdict) -> list[CheckRecord]:
        values = {"values": verdict.values}
        if verdict.vacuous:
            values["vacuous"] = list(verdict.vacuous)
        if verdict.secondary is not None:
            values["potential"] = verdict.secondary
        return [CheckRecord(check_id, "classifier", _verdict(verdict.holds), verdict.witness, self.provenance(), values)]

    def check_statistical_discrimination(self, check: dict) -> list[CheckRecord]:
        outcome = classifier_outcome(self.classifier, self.population, self.spec)
        return self._diagnostic("statistical_discrimination", statistical_discrimination_check(self.population, outcome))

    def check_becker(self, check: dict) -> list[CheckRecord]:
        outcome = classifier_outcome(self.classifier, self.population, self.spec)
        return self._diagnostic("becker", becker_test(self.population, outcome))

    def check_equilibrium_strategy(self, check: dict) -> list[CheckRecord]:
        verdict = is_equilibrium_strategy(
            self.classifier, self.population, self.spec, self.scenario.concept, self.scenario.search_budget,
        )
        return [CheckRecord(
            "equilibrium_strategy", "classifier", _verdict(verdict.holds), verdict.witness,
            self.provenance(), verdict.values,
        )]

    def check_equilibrium(self, check: dict) -> list[CheckRecord]:
        candidate = check.get("candidate") or self.population.ids[0]
        if candidate not in self.population.ids:
            raise ScenarioError(f"Unknown candidate {candidate} in equilibrium check")
        game = self.bilateral(candidate)
        beliefs = self.scenario.beliefs

        offer = check.get("offer")
        if offer is None and self.classifier is not None and self.classifier.decision(candidate).is_point:
            offer = self.classifier.offer(candidate)
        if offer is None and beliefs is not None:
            offer = beliefs.believed_offer
        if offer is None:
            raise ScenarioError("Equilibrium check needs an offer, a pure classifier or beliefs")

        threshold = beliefs.threshold if beliefs is not None else self.spec.outside_of(candidate)
        profile = StrategyProfile({
            FIRM: firm_offer(game, offer),
            candidate: threshold_policy(game, candidate, threshold),
        })
        target = f"{candidate}@{format_rational(to_rational(offer))}"

        nash = check_nash(game, profile)
        records = [CheckRecord(
            "equilibrium", f"{target}:nash", _verdict(nash.holds), nash.witness,
            self.provenance(concept="nash"), describe(profile),
        )]

        if beliefs is not None:
            sce = check_sce(game, profile, beliefs.to_beliefs(game, candidate))
            space = "given beliefs"
            witness, holds = sce.witness, sce.holds
        elif self.scenario.belief_space == "correct":
            sce = check_sce(game, profile, {p: Beliefs.correct(game, profile, p) for p in game.players})
            space = "correct beliefs"
            witness, holds = sce.witness, sce.holds
        else:
            grid = market_belief_grid(game)
            space = grid.describe()
            found = find_sce_witness(game, profile, grid, self.scenario.search_budget)
            holds = found is not None
            witness = None if holds else {"reason": "no supporting beliefs", "belief_space": space}
        records.append(CheckRecord(
            "equilibrium", f"{target}:sce", _verdict(holds), witness,
            self.provenance(concept="sce", belief_space=space), describe(profile),
        ))
        return records

    def check_blatant_unfairness(self, check: dict) -> list[CheckRecord]:
        if self.scenario.cap is not None:
            return self._capped_blatant()
        if self.classifier is None:
            raise ScenarioError("Check blatant_unfairness needs a classifier or a job cap")

        candidates = [check["candidate"]] if "candidate" in check else list(self.population.ids)
        eqset = None
        for candidate in candidates:
            game = self.bilateral(candidate)
            eqset = self.equilibria(game, f"bilateral:{candidate}")
            seed = UnfairSeed(self.classifier.decision(candidate), candidate)
            try:
                flag = validate_seed(seed, game, eqset)
            except HypothesisError:
                continue
            logger.info(f"Decision for {candidate} is blatantly unfair to {flag.player}")
            witness = {"candidate": candidate, **describe(flag)}
            return [CheckRecord("blatant_unfairness", "classifier", "flagged", witness, self.provenance(belief_space=eqset.belief_space))]
        return [CheckRecord(
            "blatant_unfairness", "classifier", _not_flagged(eqset), None, self.provenance(belief_space=eqset.belief_space),
        )]

    def capped_equilibria(self) -> EquilibriumSet:
        """Enumerate every equilibrium of the capped market, whatever its job count."""
        cap = self.scenario.cap
        name = f"capped:{cap['jobs']}"
        if name not in self._eqsets:
            game = apply_job_cap(self.spec, self.population, cap["jobs"], cap["offers"])
            self.equilibria(game, name)
        return self._eqsets[name]

    def capped_flags(self) -> list[Flag]:
        """Flag equilibria offering exactly the cap; witnesses range over the whole set."""
        eqset = self.capped_equilibria()
        return [flag for flag in blatant_flags(eqset) if _offers_cap(eqset, flag.member)]

    def _capped_blatant(self) -> list[CheckRecord]:
        cap = self.scenario.cap
        name = f"capped:{cap['jobs']}"
        eqset = self.capped_equilibria()
        flags = self.capped_flags()

        values = {
            "equilibria": len(eqset),
            "exact_cap": sum(1 for m in eqset if _offers_cap(eqset, m)),
            "flags": len(flags),
        }
        provenance = self.provenance(belief_space=eqset.belief_space, jobs=cap["jobs"])
        if flags:
            return [CheckRecord("blatant_unfairness", name, "flagged", flags[0], provenance, values)]
        return [CheckRecord("blatant_unfairness", name, _not_flagged(eqset), None, provenance, values)]


def _not_flagged(eqset: EquilibriumSet) -> str:
    # Nash sets are exhaustive; SCE sets only cover the searched beliefs.
    return "clear" if eqset.concept == "nash" else "not_flagged_within_search"


def _offers_cap(eqset: EquilibriumSet, member) -> bool:
    game = eqset.game
    return game.job_count(member.profile[FIRM].action(FIRM)) == game.cap


def run_audit(scenario: Scenario) -> AuditReport:
    """Run every check requested by a scenario.

    .. code-block:: python

        report = run_audit(load_scenario("corollary.json"))
        report.record("blatant_unfairness")["verdict"]  # "flagged"

    :param scenario: Validated scenario.
    :returns: An instance of :class:`AuditReport`.
    :raises BudgetExceededError: Some enumeration exceeds its budget; no partial report is returned.
    """
    started = time.perf_counter()
    auditor = _Auditor(scenario)
    records = []
    for check in scenario.checks:
        records.extend(auditor.run(check))

    elapsed = time.perf_counter() - started
    logger.info(f"Audit of {len(scenario.checks)} check(s) finished in {elapsed:.3f}s")
    return AuditReport(scenario.digest, records, auditor.listings, {"seconds": round(elapsed, 6)})


def resolve_classifier(scenario: Scenario) -> Optional[Classifier]:
    """Build the classifier of a scenario, running its construction when asked for one."""
    return _Auditor(scenario).classifier


def scenario_equilibria(scenario: Scenario, candidate: Optional[str] = None) -> EquilibriumSet:
    """Enumerate the equilibria of a scenario's market.

    With a job cap this is every equilibrium of the capped simultaneous
    market, otherwise the bilateral market of ``candidate`` (the
    first candidate by default).
    """
    auditor = _Auditor(scenario)
    if scenario.cap is not None:
        return auditor.capped_equilibria()
    candidate = candidate or scenario.population.ids[0]
    if candidate not in scenario.population.ids:
        raise ScenarioError(f"Unknown candidate {candidate}")
    return auditor.equilibria(auditor.bilateral(candidate), f"bilateral:{candidate}")


def scenario_flags(scenario: Scenario, candidate: Optional[str] = None) -> tuple[EquilibriumSet, list[Flag]]:
    """Flag every blatantly unfair equilibrium of :func:`scenario_equilibria`.

    With a job cap only equilibria offering exactly the cap are flagged.
    """
    if scenario.cap is not None:
        auditor = _Auditor(scenario)
        return auditor.capped_equilibria(), auditor.capped_flags()
    eqset = scenario_equilibria(scenario, candidate)
    return eqset, blatant_flags(eqset)


#: Verdict of every check of the corollary scenario.
COROLLARY_VERDICTS = {
    "statistical_parity": "pass",
    "equalized_odds": "pass",
    "sufficiency": "pass",
    "individual_fairness": "pass",
    "counterfactual_fairness": "pass",
    "no_taste_based": "pass",
    "statistical_discrimination": "pass",
    "becker": "pass",
    "blatant_unfairness": "flagged",
}

COROLLARY_WITNESS_OFFER = Fraction(3, 2)


def corollary_scenario(grid_step: Any = Fraction(1, 4), group_count: int = 2, size: int = 6) -> dict:
    """Build the scenario where offering nothing to everyone is fair yet blatantly unfair.

    Candidates have distinct one-dimensional features, the same label and
    unit surplus; sensitive groups are assigned round robin. The causal
    model draws group and feature independently, so the group has no
    descendants.
    """
    try:
        step = to_rational(grid_step)
    except ValueError as exc:
        raise ScenarioError(f"Invalid grid step: {exc}")
    if step <= 0:
        raise ScenarioError(f"Invalid grid step {step}")
    if not {Fraction(0), COROLLARY_WITNESS_OFFER} <= set(offer_grid(step)):
        raise ScenarioError(f"Offer grid of step {step} must contain 0 and 3/2")
    if group_count < 1 or group_count > size:
        raise ScenarioError(f"Group count must lie between 1 and {size}")

    groups = [f"g{i}" for i in range(group_count)]
    population = [
        {"id": f"x{i}", "features": [str(i)], "sensitive": groups[i % group_count], "label": "1"}
        for i in range(size)
    ]
    probability = format_rational(Fraction(1, size))
    group_probability = format_rational(Fraction(1, group_count))
    scm = {
        "parents": {"A": ["UA"], "X": ["UX"], "D": ["X"]},
        "functions": {
            "A": [{"inputs": [g], "value": g} for g in groups],
            "X": [{"inputs": [str(i)], "value": str(i)} for i in range(size)],
        },
        "noise": {
            "UA": [{"value": g, "probability": group_probability} for g in groups],
            "UX": [{"value": str(i), "probability": probability} for i in range(size)],
        },
        "features": ["X"],
    }
    checks = [{"id": check_id} for check_id in COROLLARY_VERDICTS]
    for check in checks:
        if check["id"] in ("counterfactual_fairness", "no_taste_based"):
            check["scm"] = scm
        elif check["id"] == "blatant_unfairness":
            check["candidate"] = "x0"

    return {
        "version": SCENARIO_VERSION,
        "market": {"grid_step": format_rational(step)},
        "population": population,
        "classifier": {"kind": "constant", "decision": "0"},
        "concept": "sce",
        "strategy_space": "threshold",
        "checks": checks,
    }


def corollary_deviations(report: AuditReport) -> list[str]:
    """List the checks of a corollary report whose verdict deviates from the expected one."""
    deviations = []
    for check_id, expected in COROLLARY_VERDICTS.items():
        try:
            record = report.record(check_id)
        except KeyError:
            deviations.append(f"{check_id}: missing")
            continue
        if record["verdict"] != expected:
            deviations.append(f"{check_id}: {record['verdict']} (expected {expected})")

    try:
        witness = report.record("blatant_unfairness")["witness"] or {}
        offer = witness["witness"]["profile"][FIRM][FIRM]
    except (KeyError, TypeError):
        offer = None
    if offer != format_rational(COROLLARY_WITNESS_OFFER):
        deviations.append(f"blatant_unfairness witness offer: {offer} (expected {format_rational(COROLLARY_WITNESS_OFFER)})")
    return deviations


def reproduce_corollary(grid_step: Any = Fraction(1, 4), group_count: int = 2) -> AuditReport:
    """Generate and audit the corollary scenario.

    :param grid_step: Offer grid step; the grid must contain 0 and 3/2.
    :param group_count: Number of sensitive groups among the six candidates.
    :returns: An instance of :class:`AuditReport`; see :func:`corollary_deviations`.
    """
    report = run_audit(parse_scenario(corollary_scenario(grid_step, group_count)))
    deviations = corollary_deviations(report)
    if deviations:
        logger.warning(f"Corollary verdicts deviate: {'; '.join(deviations)}")
    return report
