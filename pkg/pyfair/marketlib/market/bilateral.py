"""This module contains the bilateral hiring market between the firm and one candidate.

The firm offers a grid value; the candidate accepts (the pair splits the
surplus) or rejects, in which case the market pays both sides their
outside options.
"""

from __future__ import annotations

import logging
from typing import (
    Any,
    Iterable,
    Optional,
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
from pyfair.marketlib.market.spec import (
    MarketError,
    MarketGame,
    MarketSpec,
    candidate_key,
)
from pyfair.marketlib.utils import to_rational

logger = logging.getLogger(__name__)


def restrict_offers(spec: MarketSpec, offers: Optional[Iterable[Any]]) -> tuple:
    """Get offers the firm may make, optionally restricted to a subset of the grid."""
    if offers is None:
        return spec.offer_grid
    chosen = {to_rational(offer) for offer in offers}
    missing = sorted(chosen.difference(spec.offer_grid))
    if missing:
        raise MarketError(f"Offers {', '.join(map(str, missing))} are not on the offer grid")
    if not chosen:
        raise MarketError("Offer grid is empty")
    return tuple(sorted(chosen))


class BilateralMarket(MarketGame):
    """Bilateral market game of the firm and one candidate."""

    kind = "bilateral"

    def market_key(self, candidate: str) -> str:
        return MARKET

    def decisions(self, history: tuple) -> dict:
        return {self.candidates[0]: history[1]}


def build_bilateral_market(spec: MarketSpec, candidate: str, offers: Optional[Iterable[Any]] = None) -> BilateralMarket:
    """Build the three-level market game of the firm and one candidate.

    .. code-block:: python

        spec = MarketSpec([0, Fraction(3, 2), 3])
        game = build_bilateral_market(spec, "x")

    :param spec: Market parameters.
    :param candidate: Candidate id.
    :param offers: Optional subset of the grid the firm may offer.
    :returns: An instance of :class:`BilateralMarket`.
    """
    offers = restrict_offers(spec, offers)
    actions = spec.candidate_actions()
    pairs = spec.nature_actions(candidate)

    root_set = InformationSet(FIRM, FIRM, offers)
    market_set = InformationSet(MARKET, MARKET, pairs)
    candidate_sets = {offer: InformationSet(candidate_key(candidate, offer), candidate, actions) for offer in offers}

    def leaf(firm, value) -> Node:
        return Node.leaf({FIRM: firm, candidate: value})

    def after_reject(pair) -> Node:
        return leaf(*spec.reject_payoffs(*pair))

    def after_offer(offer) -> Node:
        def respond(action) -> Node:
            if action == ACCEPT:
                return leaf(*spec.accept_payoffs(candidate, offer))
            return Node(market_set, after_reject)
        return Node(candidate_sets[offer], respond)

    nature = BehaviorStrategy(MARKET, {MARKET: Distribution.point(spec.market_action(candidate))})
    infosets = [root_set] + list(candidate_sets.values()) + [market_set]
    logger.debug(f"Built bilateral market for {candidate} with {len(offers)} offers")
    return BilateralMarket(spec, (candidate,), offers, Node(root_set, after_offer), infosets, nature)
