"""This module contains common firm and candidate strategies of market games."""

from __future__ import annotations

from typing import (
    Any,
    Mapping,
    Optional,
)

from pyfair.marketlib.constants import (
    ACCEPT,
    FIRM,
    REJECT,
)
from pyfair.marketlib.game.strategy import PureStrategy
from pyfair.marketlib.market.spec import (
    MarketError,
    MarketGame,
    candidate_key,
)
from pyfair.marketlib.settings import get_strategy_space
from pyfair.marketlib.utils import to_rational
from pyfair.marketlib.validators import validate_strategy_space


def threshold_policy(game: MarketGame, candidate: str, threshold: Optional[Any] = None) -> PureStrategy:
    """Get candidate strategy accepting every offer at or above ``threshold``.

    :param game: Market game.
    :param candidate: Candidate id.
    :param threshold: Any rational; ``None`` rejects every offer.
    """
    if candidate not in game.candidates:
        raise MarketError(f"Unknown candidate {candidate}")
    threshold = None if threshold is None else to_rational(threshold)
    return PureStrategy(candidate, {
        candidate_key(candidate, offer): ACCEPT if threshold is not None and offer >= threshold else REJECT
        for offer in game.offers
    })


def threshold_policies(game: MarketGame, candidate: str) -> list[PureStrategy]:
    """Get the distinct threshold strategies of a candidate (ascending thresholds, then reject-all)."""
    return [threshold_policy(game, candidate, offer) for offer in game.offers] + [threshold_policy(game, candidate)]


def firm_offer(game: MarketGame, offer: Any) -> PureStrategy:
    """Get firm strategy making given offer.

    In a simultaneous market ``offer`` may be a mapping of candidate to
    offer, a tuple in population order, or a single offer made to everyone.
    """
    if game.kind == "bilateral":
        action = to_rational(offer)
    elif isinstance(offer, Mapping):
        try:
            action = tuple(to_rational(offer[c]) for c in game.candidates)
        except KeyError as exc:
            raise MarketError(f"Missing offer for candidate {exc.args[0]}")
    elif isinstance(offer, (tuple, list)):
        action = tuple(to_rational(o) for o in offer)
    else:
        action = tuple(to_rational(offer) for _ in game.candidates)

    if action not in game.information_sets[FIRM].actions:
        raise MarketError(f"Firm cannot offer {action}")
    return PureStrategy(FIRM, {FIRM: action})


def market_strategy_sets(game: MarketGame, space: Optional[str] = None) -> dict:
    """Get per-player strategy sets for enumeration.

    The ``threshold`` space restricts candidates to threshold strategies;
    ``full`` leaves every player unrestricted.
    """
    space = space or get_strategy_space()
    validate_strategy_space(space)
    if space == "full":
        return {}
    return {c: threshold_policies(game, c) for c in game.candidates}
