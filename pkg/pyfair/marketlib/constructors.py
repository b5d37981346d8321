"""This module contains constructions of fair yet blatantly unfair classifiers.

Each construction starts from a seed: a firm strategy that is played at a
blatantly unfair equilibrium of the bilateral market of an anchor
candidate. The classifier gives the anchor that strategy and arranges
everybody else so that the requested fairness notion holds.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from fractions import Fraction
from typing import (
    Any,
    Iterable,
    NamedTuple,
    Optional,
    Union,
)

from pyfair.marketlib.blatant import (
    BlatantError,
    EquilibriumSet,
    Flag,
    Member,
    is_blatantly_unfair_two_player,
)
from pyfair.marketlib.constants import FIRM
from pyfair.marketlib.equilibrium.checks import check_nash
from pyfair.marketlib.equilibrium.search import find_sce_witness
from pyfair.marketlib.fairness.group import (
    Feature,
    apply_feature,
)
from pyfair.marketlib.fairness.population import (
    Classifier,
    Population,
)
from pyfair.marketlib.game.analysis import evaluate_profile
from pyfair.marketlib.game.strategy import (
    Distribution,
    MixedStrategy,
    PureStrategy,
    StrategyProfile,
)
from pyfair.marketlib.market.policies import (
    market_strategy_sets,
    threshold_policies,
)
from pyfair.marketlib.market.propositions import market_belief_grid
from pyfair.marketlib.market.spec import MarketGame
from pyfair.marketlib.settings import get_concept
from pyfair.marketlib.utils import (
    sort_key,
    to_rational,
)

logger = logging.getLogger(__name__)


class HypothesisError(ValueError):
    """Class to mark inputs outside the hypotheses a construction needs."""

    pass


class UnfairSeed(NamedTuple):
    """Firm strategy of a blatantly unfair equilibrium and the candidate it is played against."""

    strategy: Distribution
    anchor: str

    @classmethod
    def create(cls, strategy: Union[Distribution, Any], anchor: str) -> UnfairSeed:
        if not isinstance(strategy, Distribution):
            strategy = Distribution.point(to_rational(strategy))
        return cls(strategy, anchor)

    @property
    def is_pure(self) -> bool:
        return self.strategy.is_point

    def firm_strategy(self) -> Union[PureStrategy, MixedStrategy]:
        if self.is_pure:
            return PureStrategy(FIRM, {FIRM: self.strategy.support()[0]})
        return MixedStrategy(FIRM, {PureStrategy(FIRM, {FIRM: d}): p for d, p in self.strategy.items()})


def _is_equilibrium(game: MarketGame, profile: StrategyProfile, concept: str) -> Optional[dict]:
    if concept == "nash":
        return {} if check_nash(game, profile).holds else None
    return find_sce_witness(game, profile, market_belief_grid(game))


def validate_seed(
    seed: UnfairSeed,
    game: MarketGame,
    eqset: Optional[EquilibriumSet] = None,
    concept: Optional[str] = None,
) -> Flag:
    """Check that the seed strategy is played at a blatantly unfair equilibrium.

    The candidate's threshold strategies are tried in order; the first
    equilibrium found blatantly unfair (to the candidate, then to the firm)
    is returned.

    :param seed: Seed whose anchor is the candidate of ``game``.
    :param game: Bilateral market of the anchor.
    :param eqset: Pure equilibria of ``game`` (enumerated when omitted).
    :param concept: Solution concept, used when ``eqset`` is omitted.
    :raises HypothesisError: No such equilibrium exists in the searched space.
    """
    candidate = game.candidates[0]
    if seed.anchor != candidate:
        raise HypothesisError(f"Seed anchor {seed.anchor} is not the candidate {candidate} of the market")
    missing = [d for d in seed.strategy if d not in game.offers]
    if missing:
        raise HypothesisError(f"Seed offers {missing} are not available in the market")

    if eqset is None:
        concept = concept or get_concept()
        eqset = EquilibriumSet.enumerate(
            game, concept, market_belief_grid(game), strategy_sets=market_strategy_sets(game, "threshold"),
        )

    firm = seed.firm_strategy()
    for policy in threshold_policies(game, candidate):
        profile = StrategyProfile({FIRM: firm, candidate: policy})
        try:
            index = eqset.index(profile)
            members, member = eqset, eqset.members[index]
        except BlatantError:
            if seed.is_pure:
                continue
            beliefs = _is_equilibrium(game, profile, eqset.concept)
            if beliefs is None:
                continue
            member = Member(profile, evaluate_profile(game, profile), beliefs or None)
            members = EquilibriumSet(game, eqset.concept, eqset.members + (member,), eqset.belief_space)
            index = len(members) - 1

        for player in (candidate, FIRM):
            verdict = is_blatantly_unfair_two_player(members, member, player)
            if verdict.holds:
                logger.debug(f"Seed is blatantly unfair to {player}")
                return Flag(index, member, player, verdict.witness)

    raise HypothesisError(f"Seed strategy is not played at a blatantly unfair equilibrium of the market of {candidate}")


def right_inverse_table(f1: Feature, decisions: Iterable[Any], label: Any, values: Optional[Iterable[Any]] = None) -> dict:
    """Invert ``d -> F1(d, label)`` on its image.

    Each image value maps to the smallest decision reaching it.

    :param f1: Function or table of (decision, label).
    :param decisions: Finite decision set.
    :param label: Fixed label.
    :param values: Values that must be invertible; defaults to the image.
    :raises HypothesisError: Some value lies outside the image.
    """
    table: dict = {}
    for decision in sorted(decisions, key=sort_key):
        table.setdefault(apply_feature(f1, "F1", decision, label), decision)

    for value in (values or ()):
        if value not in table:
            raise HypothesisError(f"No decision reaches value {value!r} for label {label!r}")
    return table


def _validated(seed: UnfairSeed, population: Population, game: Optional[MarketGame], eqset: Optional[EquilibriumSet]) -> None:
    if seed.anchor not in population.ids:
        raise HypothesisError(f"Seed anchor {seed.anchor} is not in the population")
    if game is not None:
        validate_seed(seed, game, eqset)


def construct_group_fair_blatant(
    f1: Feature,
    population: Population,
    seed: UnfairSeed,
    decisions: Iterable[Any],
    game: Optional[MarketGame] = None,
    eqset: Optional[EquilibriumSet] = None,
) -> Classifier:
    """Build a classifier passing every ``(F1, F2)`` group fairness check yet blatantly unfair.

    The anchor gets the seed strategy. Every other candidate gets the
    distribution of the anchor's ``F1`` value pulled back through the right
    inverse of ``F1`` at their own label, so ``F1(g(x), Y(x))`` has the same
    distribution for everyone.

    :param f1: ``F1`` as function or table.
    :param population: Candidates.
    :param seed: Unfair seed (may be mixed).
    :param decisions: Decision set.
    :param game: Bilateral market of the anchor; the seed is validated when given.
    :param eqset: Equilibria of ``game`` reused for validation.
    :raises HypothesisError: Some label cannot reach an image value of ``F1``.
    """
    decisions = tuple(sorted({to_rational(d) for d in decisions}, key=sort_key))
    missing = [d for d in seed.strategy if d not in decisions]
    if missing:
        raise HypothesisError(f"Seed decisions {missing} are outside the decision set")
    _validated(seed, population, game, eqset)

    labels = population.labels()
    image = set()
    for label in labels:
        image.update(apply_feature(f1, "F1", d, label) for d in decisions)
    inverses = {label: right_inverse_table(f1, decisions, label, sorted(image, key=sort_key)) for label in labels}

    anchor_label = population[seed.anchor].label
    target: dict = defaultdict(Fraction)
    for decision, prob in seed.strategy.items():
        target[apply_feature(f1, "F1", decision, anchor_label)] += prob

    assignments = {}
    for candidate in population:
        if candidate.id == seed.anchor:
            assignments[candidate.id] = seed.strategy
        else:
            inverse = inverses[candidate.label]
            assignments[candidate.id] = Distribution((inverse[value], prob) for value, prob in target.items())
    return Classifier(assignments)


def _canonical_injection(labels: tuple, image: list) -> dict:
    return dict(zip(labels, image))


def _anchored_injection(labels: tuple, image: list, anchor_label: Any, anchor_value: Any) -> dict:
    rest = [v for v in image if v != anchor_value]
    others = [y for y in labels if y != anchor_label]
    injection = dict(zip(others, rest))
    injection[anchor_label] = anchor_value
    return injection


def construct_sufficiency_blatant(
    f2: Feature,
    population: Population,
    seed: UnfairSeed,
    decisions: Iterable[Any],
    game: Optional[MarketGame] = None,
    eqset: Optional[EquilibriumSet] = None,
) -> Classifier:
    """Build a classifier whose ``F2`` value reveals the label, yet blatantly unfair.

    Labels are injected into the image of ``F2`` (canonical orders, order
    preserving) and each label ``y`` gets the smallest decision ``d_y`` with
    ``F2(d_y, y) = i(y)``. With ``y0`` the anchor's label:

    - if ``d_y0`` is the seed decision, every label ``y`` gets ``d_y``;
    - if no label present gets the seed decision, ``y0`` gets the seed and the rest ``d_y``;
    - otherwise ``y0`` and the label ``y1`` with ``d_y1`` equal to the seed swap decisions.

    When the resulting ``F2`` values collide across labels, the injection is
    re-anchored so that ``i(y0)`` is the seed's ``F2`` value.

    :param f2: ``F2`` as function or table.
    :param population: Candidates.
    :param seed: Pure unfair seed.
    :param decisions: Decision set.
    :param game: Bilateral market of the anchor; the seed is validated when given.
    :param eqset: Equilibria of ``game`` reused for validation.
    :raises HypothesisError: The seed is mixed, there are more labels than
        ``F2`` values, or some label cannot reach an ``F2`` value.
    """
    if not seed.is_pure:
        raise HypothesisError("Sufficiency construction requires a pure seed strategy")
    decisions = tuple(sorted({to_rational(d) for d in decisions}, key=sort_key))
    pi = seed.strategy.support()[0]
    if pi not in decisions:
        raise HypothesisError(f"Seed decision {pi} is outside the decision set")
    _validated(seed, population, game, eqset)

    labels = population.labels()
    image = set()
    for label in labels:
        image.update(apply_feature(f2, "F2", d, label) for d in decisions)
    image = sorted(image, key=sort_key)
    if len(labels) > len(image):
        raise HypothesisError(f"{len(labels)} labels cannot be injected into {len(image)} F2 values")
    inverses = {label: right_inverse_table(f2, decisions, label, image) for label in labels}

    anchor_label = population[seed.anchor].label
    injection = _canonical_injection(labels, image)
    chosen = {y: inverses[y][injection[y]] for y in labels}

    if chosen[anchor_label] == pi:
        assigned = dict(chosen)
    else:
        other = next((y for y in labels if chosen[y] == pi), None)
        assigned = dict(chosen)
        if other is None:
            assigned[anchor_label] = pi
        else:
            assigned[anchor_label], assigned[other] = chosen[other], chosen[anchor_label]

    values = [apply_feature(f2, "F2", assigned[y], y) for y in labels]
    if len(set(values)) != len(values):
        logger.warning("F2 values collide across labels; re-anchoring the label injection on the seed")
        injection = _anchored_injection(labels, image, anchor_label, apply_feature(f2, "F2", pi, anchor_label))
        assigned = {y: inverses[y][injection[y]] for y in labels}
        assigned[anchor_label] = pi

    return Classifier({c.id: assigned[c.label] for c in population})


def construct_constant(strategy: Union[Distribution, Any]) -> Classifier:
    """Build the classifier giving everybody the same (possibly mixed) decision."""
    return Classifier.constant(strategy)
