"""This module contains belief presets under which hiring profiles are self-confirming.

Three families are covered:

- any offer ``z`` accepted by the candidate, sustained by a firm that
  believes its own outside option is 3 and both sides believe the
  candidate's is ``z``;
- offers at or below the firm's outside option when the candidate's outside
  option is at least as high, sustained by correct beliefs (also Nash);
- profiles where the market never plays, so the firm may be wrong about
  the outside options.
"""

from __future__ import annotations

from typing import (
    Any,
    Iterator,
    Mapping,
    Optional,
)

from pyfair.marketlib.constants import (
    ACCEPT,
    FIRM,
    OFFER_MAX,
)
from pyfair.marketlib.equilibrium.beliefs import (
    BeliefGrid,
    Beliefs,
)
from pyfair.marketlib.game.strategy import (
    PureStrategy,
    StrategyProfile,
)
from pyfair.marketlib.market.policies import (
    firm_offer,
    threshold_policy,
)
from pyfair.marketlib.market.spec import (
    MarketGame,
    OutsideOptionBeliefs,
    candidate_key,
)
from pyfair.marketlib.utils import to_rational


def prop1_beliefs(offer: Any) -> OutsideOptionBeliefs:
    """Get beliefs sustaining an accepted offer as a self-confirming equilibrium.

    .. code-block:: python

        prop1_beliefs(0)  # o_f(f)=3, o_f(x)=o_x(x)=0

    :param offer: Offer in [0, 3].
    :returns: Beliefs with ``o_f(f)=3``, ``o_f(x)=o_x(x)=offer`` and acceptance threshold ``offer``.
    """
    offer = to_rational(offer)
    return OutsideOptionBeliefs.create(OFFER_MAX, offer, offer, OFFER_MAX, threshold=offer, believed_offer=offer)


def prop1_conditions(beliefs: OutsideOptionBeliefs) -> bool:
    """Check ``o_f(f) >= o_f(x) >= o_x(x)``."""
    return beliefs.o_f_f >= beliefs.o_f_x and beliefs.o_f_x >= beliefs.o_x_x


def prop1_profile(game: MarketGame, offer: Any, candidate: Optional[str] = None) -> StrategyProfile:
    """Get profile where the firm offers ``offer`` and the candidate accepts exactly from ``offer`` on."""
    candidate = candidate or game.candidates[0]
    return StrategyProfile({
        FIRM: firm_offer(game, offer),
        candidate: threshold_policy(game, candidate, offer),
    })


def prop2_conditions(beliefs: OutsideOptionBeliefs, market: tuple, offer: Any) -> bool:
    """Check ``o(f) = o_f(f) = o_x(f) <= o(x) = o_f(x) = o_x(x)`` and ``offer <= o(f)``.

    :param beliefs: Outside-option beliefs.
    :param market: True ``(o(f), o(x))`` pair.
    :param offer: Offer made by the firm.
    """
    firm_outside, candidate_outside = (to_rational(v) for v in market)
    return (
        firm_outside == beliefs.o_f_f == beliefs.o_x_f
        and firm_outside <= candidate_outside
        and candidate_outside == beliefs.o_f_x == beliefs.o_x_x
        and to_rational(offer) <= firm_outside
    )


def prop2_beliefs(market: tuple, offer: Any) -> OutsideOptionBeliefs:
    """Get correct beliefs about a market paying ``(o(f), o(x))`` when ``offer`` is made."""
    firm_outside, candidate_outside = (to_rational(v) for v in market)
    return OutsideOptionBeliefs.create(
        firm_outside, candidate_outside, candidate_outside, firm_outside,
        threshold=candidate_outside, believed_offer=offer,
    )


def prop2_profile(game: MarketGame, offer: Any, candidate: Optional[str] = None) -> StrategyProfile:
    """Get profile where the firm offers ``offer`` and the candidate accepts iff offered at least o(x)."""
    candidate = candidate or game.candidates[0]
    return StrategyProfile({
        FIRM: firm_offer(game, offer),
        candidate: threshold_policy(game, candidate, game.spec.outside_of(candidate)),
    })


def market_never_plays_conditions(beliefs: OutsideOptionBeliefs) -> bool:
    """Check ``o_f(f) < o_f(x)`` and ``o_f(f) >= o_x(x)``.

    Under these beliefs the firm offers ``o_f(f)``, which it believes the
    candidate accepts, so the market is never reached and nobody learns
    that the firm's view of the outside options is wrong.
    """
    return beliefs.o_f_f < beliefs.o_f_x and beliefs.o_f_f >= beliefs.o_x_x


def market_never_plays_beliefs(o_f_f: Any, o_f_x: Any, o_x_x: Any, o_x_f: Any = OFFER_MAX) -> OutsideOptionBeliefs:
    """Get beliefs where the firm offers its own believed outside option and expects acceptance."""
    return OutsideOptionBeliefs.create(o_f_f, o_f_x, o_x_x, o_x_f, threshold=o_f_f, believed_offer=o_f_f)


def market_never_plays_profile(game: MarketGame, beliefs: OutsideOptionBeliefs, candidate: Optional[str] = None) -> StrategyProfile:
    return prop1_profile(game, beliefs.o_f_f, candidate)


def _accepted_offer(game: MarketGame, profile: StrategyProfile) -> Optional[Any]:
    firm = profile.strategies.get(FIRM)
    candidate = game.candidates[0]
    policy = profile.strategies.get(candidate)
    if not isinstance(firm, PureStrategy) or not isinstance(policy, PureStrategy):
        return None
    offer = firm.action(FIRM)
    if policy.action(candidate_key(candidate, offer)) != ACCEPT:
        return None
    return offer


def market_proposals(game: MarketGame):
    """Create proposal callable trying the accepted-offer beliefs first on bilateral markets."""
    def propose(profile: StrategyProfile) -> Iterator[Mapping[str, Beliefs]]:
        if game.kind != "bilateral":
            return
        offer = _accepted_offer(game, profile)
        if offer is not None:
            yield prop1_beliefs(offer).to_beliefs(game)
    return propose


def market_belief_grid(game: MarketGame, restrict: Optional[Mapping] = None) -> BeliefGrid:
    """Get point-mass belief grid of a market game, with accepted-offer proposals."""
    return BeliefGrid(game, restrict=restrict, proposals=market_proposals(game))
