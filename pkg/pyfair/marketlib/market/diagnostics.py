"""This module contains surplus-based discrimination diagnostics of market outcomes."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import (
    Any,
    NamedTuple,
    Optional,
)

from pyfair.marketlib.constants import (
    ACCEPT,
    FIRM,
)
from pyfair.marketlib.equilibrium.checks import check_nash
from pyfair.marketlib.equilibrium.search import find_sce_witness
from pyfair.marketlib.fairness.population import (
    Classifier,
    Population,
)
from pyfair.marketlib.game.strategy import (
    MixedStrategy,
    PureStrategy,
    StrategyProfile,
)
from pyfair.marketlib.market.bilateral import build_bilateral_market
from pyfair.marketlib.market.policies import threshold_policies
from pyfair.marketlib.market.propositions import market_belief_grid
from pyfair.marketlib.market.spec import (
    EquilibriumOutcome,
    MarketError,
    MarketSpec,
)
from pyfair.marketlib.settings import get_concept
from pyfair.marketlib.validators import validate_concept

logger = logging.getLogger(__name__)


class DiagnosticVerdict(NamedTuple):
    """Verdict of a diagnostic with the per-group (or per-candidate) values it compared."""

    holds: bool
    values: dict
    witness: Any = None
    vacuous: tuple = ()
    secondary: Optional[dict] = None


def _matched(outcome: EquilibriumOutcome, candidate: str) -> bool:
    try:
        return outcome.matched[candidate]
    except KeyError:
        raise MarketError(f"Outcome does not cover candidate {candidate}")


def _first_difference(values: dict) -> Optional[tuple]:
    groups = list(values)
    for group in groups[1:]:
        if values[group] != values[groups[0]]:
            return (groups[0], group)
    return None


def statistical_discrimination_check(population: Population, outcome: EquilibriumOutcome) -> DiagnosticVerdict:
    """Compare mean realised surplus across sensitive groups.

    A matched candidate generates their surplus, an unmatched one nothing.
    Means are weighted by candidate weight. The mean potential surplus
    (as if everyone were matched) is returned as ``secondary``.

    :param population: Weighted population.
    :param outcome: Market outcome covering every candidate.
    :returns: Verdict holding iff every group mean is the same; the witness
        is a pair of groups with different means.
    """
    realised, potential = {}, {}
    for group, members in population.groups().items():
        weight = sum((c.weight for c in members), Fraction(0))
        if weight == 0:
            raise MarketError(f"Group {group} is empty")
        realised[group] = sum(
            (c.weight * outcome.surplus[c.id] for c in members if _matched(outcome, c.id)),
            Fraction(0),
        ) / weight
        potential[group] = sum((c.weight * outcome.surplus[c.id] for c in members), Fraction(0)) / weight

    witness = _first_difference(realised)
    return DiagnosticVerdict(witness is None, realised, witness, secondary=potential)


def becker_test(population: Population, outcome: EquilibriumOutcome) -> DiagnosticVerdict:
    """Compare the marginal (smallest matched) surplus across sensitive groups.

    Groups without matched candidates are vacuous and left out of the comparison.
    """
    minima, vacuous = {}, []
    for group, members in population.groups().items():
        matched = [outcome.surplus[c.id] for c in members if _matched(outcome, c.id)]
        if matched:
            minima[group] = min(matched)
        else:
            vacuous.append(group)

    witness = _first_difference(minima)
    return DiagnosticVerdict(witness is None, minima, witness, tuple(vacuous))


def _accepts(spec: MarketSpec, candidate: str, offer: Fraction) -> bool:
    outside = spec.outside_of(candidate)
    if offer == outside:
        return spec.tie_break == ACCEPT
    return offer > outside


def classifier_outcome(classifier: Classifier, population: Population, spec: MarketSpec) -> EquilibriumOutcome:
    """Get outcome when every candidate best-responds to the offers of a classifier.

    Candidates accept offers above their outside option and resolve ties by
    the market tie-break. The profile is left empty; payoffs are expected
    payoffs over the classifier's randomisation.

    :raises MarketError: A randomised offer makes acceptance random.
    """
    firm = Fraction(0)
    payoffs, matched = {}, {}
    for candidate in population:
        decision = classifier.decision(candidate.id)
        answers = {_accepts(spec, candidate.id, offer) for offer in decision}
        if len(answers) > 1:
            raise MarketError(f"Candidate {candidate.id} accepts some offers of the classifier but not others")
        accepted = answers.pop()

        value = Fraction(0)
        for offer, prob in decision.items():
            if accepted:
                gain, utility = spec.accept_payoffs(candidate.id, offer)
            else:
                gain, utility = spec.reject_payoffs(*spec.market_action(candidate.id))
            firm += prob * gain
            value += prob * utility
        payoffs[candidate.id] = value
        matched[candidate.id] = accepted

    payoffs = {FIRM: firm, **payoffs}
    return EquilibriumOutcome(None, payoffs, matched, {c.id: spec.surplus_of(c.id) for c in population})


def is_equilibrium_strategy(
    classifier: Classifier,
    population: Population,
    spec: MarketSpec,
    concept: Optional[str] = None,
    search_budget: Optional[int] = None,
) -> DiagnosticVerdict:
    """Check that the classifier's offer to each candidate is played at some equilibrium.

    For every candidate the firm's (possibly mixed) offer is paired with
    each threshold strategy of the candidate in their bilateral market
    until one pairing is an equilibrium.

    :returns: Verdict whose values map candidate to the supporting candidate
        strategy (``None`` when missing); the witness is the first unsupported candidate.
    """
    concept = concept or get_concept()
    validate_concept(concept)

    supported: dict = {}
    witness = None
    for candidate in population:
        game = build_bilateral_market(spec, candidate.id)
        decision = classifier.decision(candidate.id)
        missing = [offer for offer in decision if offer not in game.offers]
        if missing:
            raise MarketError(f"Classifier offers {candidate.id} values off the grid: {missing}")

        if decision.is_point:
            firm = PureStrategy(FIRM, {FIRM: decision.support()[0]})
        else:
            firm = MixedStrategy(FIRM, {PureStrategy(FIRM, {FIRM: o}): p for o, p in decision.items()})

        supported[candidate.id] = None
        space = market_belief_grid(game)
        for policy in threshold_policies(game, candidate.id):
            profile = StrategyProfile({FIRM: firm, candidate.id: policy})
            if concept == "nash":
                found = check_nash(game, profile).holds
            else:
                found = find_sce_witness(game, profile, space, search_budget) is not None
            if found:
                supported[candidate.id] = policy
                break

        if supported[candidate.id] is None and witness is None:
            logger.debug(f"Offer to {candidate.id} is not an equilibrium strategy")
            witness = candidate.id

    return DiagnosticVerdict(witness is None, supported, witness)
