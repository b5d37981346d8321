"""This module contains the simultaneous market of the firm and a whole population."""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import product
from math import comb
from typing import (
    Any,
    Iterable,
    Optional,
    Sequence,
)

from pyfair.marketlib.constants import (
    ACCEPT,
    FIRM,
    MARKET,
)
from pyfair.marketlib.game.strategy import (
    BehaviorStrategy,
    Distribution,
)
from pyfair.marketlib.game.tree import (
    InformationSet,
    Node,
)
from pyfair.marketlib.market.bilateral import restrict_offers
from pyfair.marketlib.market.spec import (
    MarketError,
    MarketGame,
    MarketSpec,
    candidate_key,
)
from pyfair.marketlib.utils import to_rational

logger = logging.getLogger(__name__)


class SimultaneousMarket(MarketGame):
    """Market where the firm offers every candidate at once.

    The firm's action is a tuple of offers in population order. Candidates
    then decide one after another without observing each other, and the
    market pays outside options to every rejecting candidate independently.
    """

    kind = "simultaneous"
    cap: Optional[int] = None

    def market_key(self, candidate: str) -> str:
        return f"{MARKET}@{candidate}"

    def decisions(self, history: tuple) -> dict:
        return {c: history[1 + i] for i, c in enumerate(self.candidates)}

    def job_count(self, action: tuple) -> int:
        """Count candidates offered a job (a non-zero offer) by a firm action."""
        return sum(1 for offer in action if offer != 0)


def _candidate_ids(population: Any) -> tuple:
    ids = tuple(getattr(population, "ids", population))
    if not ids:
        raise MarketError("Population is empty")
    if len(set(ids)) != len(ids):
        raise MarketError("Candidate ids must be unique")
    return ids


def build_simultaneous_market(
    spec: MarketSpec,
    population: Any,
    offers: Optional[Iterable[Any]] = None,
    firm_actions: Optional[Sequence[tuple]] = None,
) -> SimultaneousMarket:
    """Build the game where the firm makes one offer to every candidate.

    :param spec: Market parameters.
    :param population: A :class:`~pyfair.marketlib.fairness.population.Population` or candidate ids.
    :param offers: Optional subset of the grid the firm may offer.
    :param firm_actions: Optional explicit list of offer tuples (population order).
    :returns: An instance of :class:`SimultaneousMarket`.
    """
    ids = _candidate_ids(population)
    offers = restrict_offers(spec, offers)
    if firm_actions is None:
        firm_actions = list(product(offers, repeat=len(ids)))
    firm_actions = tuple(tuple(to_rational(o) for o in action) for action in firm_actions)
    if not firm_actions:
        raise MarketError("Firm has no action")
    for action in firm_actions:
        if len(action) != len(ids) or any(o not in offers for o in action):
            raise MarketError(f"Firm action {action} does not assign a grid offer to every candidate")

    actions = spec.candidate_actions()
    root_set = InformationSet(FIRM, FIRM, firm_actions)
    candidate_sets = {
        (c, offer): InformationSet(candidate_key(c, offer), c, actions)
        for c in ids
        for offer in offers
    }
    market_sets = {c: InformationSet(f"{MARKET}@{c}", MARKET, spec.nature_actions(c)) for c in ids}

    def settle(action: tuple, choices: tuple, pairs: dict) -> Node:
        firm = Fraction(0)
        payoffs = {}
        for c, offer, choice in zip(ids, action, choices):
            if choice == ACCEPT:
                gain, value = spec.accept_payoffs(c, offer)
            else:
                gain, value = spec.reject_payoffs(*pairs[c])
            firm += gain
            payoffs[c] = value
        payoffs[FIRM] = firm
        return Node.leaf(payoffs)

    def markets(action: tuple, choices: tuple, pending: tuple, pairs: dict) -> Node:
        if not pending:
            return settle(action, choices, pairs)
        c = pending[0]
        return Node(market_sets[c], lambda pair: markets(action, choices, pending[1:], {**pairs, c: pair}))

    def respond(action: tuple, choices: tuple) -> Node:
        i = len(choices)
        if i == len(ids):
            rejecting = tuple(c for c, choice in zip(ids, choices) if choice != ACCEPT)
            return markets(action, choices, rejecting, {})
        return Node(candidate_sets[(ids[i], action[i])], lambda choice: respond(action, choices + (choice,)))

    used = {offer for action in firm_actions for offer in action}
    infosets = [root_set]
    infosets += [h for (c, offer), h in candidate_sets.items() if offer in used]
    infosets += list(market_sets.values())

    nature = BehaviorStrategy(MARKET, {f"{MARKET}@{c}": Distribution.point(spec.market_action(c)) for c in ids})
    logger.debug(f"Built simultaneous market for {len(ids)} candidates with {len(firm_actions)} firm actions")
    return SimultaneousMarket(
        spec, ids, tuple(o for o in offers if o in used),
        Node(root_set, lambda action: respond(action, ())), infosets, nature,
    )


def count_capped_actions(size: int, cap: int, allowed_offers: Iterable[Any]) -> int:
    """Count firm actions with at most ``cap`` non-zero offers."""
    nonzero = len({to_rational(o) for o in allowed_offers} - {Fraction(0)})
    return sum(comb(size, k) * nonzero ** k for k in range(cap + 1))


def apply_job_cap(spec: MarketSpec, population: Any, cap: int, allowed_offers: Iterable[Any] = (0, Fraction(3, 2))) -> SimultaneousMarket:
    """Build the simultaneous market where the firm offers at most ``cap`` jobs.

    A job is a non-zero offer; offers are drawn from ``allowed_offers``.

    :param spec: Market parameters.
    :param population: Population or candidate ids.
    :param cap: Maximum number of jobs; must be smaller than the population.
    :param allowed_offers: Offers the firm may make.
    :returns: An instance of :class:`SimultaneousMarket` with ``cap`` set.
    """
    ids = _candidate_ids(population)
    if isinstance(cap, bool) or not isinstance(cap, int) or cap < 0:
        raise MarketError(f"Job cap must be a non-negative integer; got {cap!r}")
    if cap >= len(ids):
        raise MarketError(f"Job cap {cap} must be smaller than the population size {len(ids)}")

    offers = restrict_offers(spec, allowed_offers)
    if 0 not in offers:
        raise MarketError("Allowed offers must include 0 (no job)")
    firm_actions = [
        action for action in product(offers, repeat=len(ids))
        if sum(1 for o in action if o != 0) <= cap
    ]

    game = build_simultaneous_market(spec, ids, offers, firm_actions)
    game.cap = cap
    logger.info(f"Job cap {cap} leaves {len(firm_actions)} firm strategies")
    return game
