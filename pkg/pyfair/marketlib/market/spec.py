"""This module contains market parameters, belief shorthand and outcomes."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import (
    Any,
    Iterable,
    Mapping,
    NamedTuple,
    Optional,
)

from pyfair.marketlib.constants import (
    ACCEPT,
    DEFAULT_NEED_PENALTY,
    DEFAULT_SURPLUS,
    FIRM,
    MARKET,
    MARKET_SURPLUS,
    OFFER_MAX,
    OFFER_MIN,
    REJECT,
)
from pyfair.marketlib.game.analysis import (
    evaluate_profile,
    outcome_distribution,
)
from pyfair.marketlib.game.strategy import (
    BehaviorStrategy,
    Distribution,
    StrategyProfile,
)
from pyfair.marketlib.game.tree import (
    GameTree,
    Node,
)
from pyfair.marketlib.settings import get_tie_break
from pyfair.marketlib.utils import (
    format_rational,
    offer_grid,
    to_rational,
)
from pyfair.marketlib.validators import (
    validate_offer_range,
    validate_tie_break,
)

logger = logging.getLogger(__name__)


class MarketError(ValueError):
    """Class to mark invalid market parameters, populations or caps."""

    pass


def _checked(value: Any, name: str) -> Fraction:
    value = to_rational(value)
    try:
        validate_offer_range(value, name)
    except ValueError as exc:
        raise MarketError(exc)
    return value


class MarketSpec:
    """Parameters of a hiring market.

    .. code-block:: python

        from pyfair.marketlib.market.spec import MarketSpec

        spec = MarketSpec.from_step("1/4", firm_outside=1, candidate_outside=2)
        len(spec.offer_grid)  # 13

    :param offer_grid: Offers the firm may make; must contain 0 and 3.
    :param firm_outside: Outside option of the firm.
    :param candidate_outside: Outside option shared by candidates, or a
        mapping of candidate id to outside option (key ``None`` holds the default).
    :param surplus: Surplus of a matched pair, shared or per candidate (same form).
    :param need_penalty: Utility both sides take on top of their outside value.
    :param tie_break: Candidate action when indifferent (``accept`` or ``reject``).
    """

    def __init__(
        self,
        offer_grid: Iterable[Any],
        firm_outside: Any = 0,
        candidate_outside: Any = 0,
        surplus: Any = DEFAULT_SURPLUS,
        need_penalty: Any = DEFAULT_NEED_PENALTY,
        tie_break: Optional[str] = None,
    ):
        grid = tuple(sorted({to_rational(offer) for offer in offer_grid}))
        if not grid:
            raise MarketError("Offer grid is empty")
        for offer in grid:
            _checked(offer, "offer")
        if OFFER_MIN not in grid or OFFER_MAX not in grid:
            raise MarketError(f"Offer grid must contain {OFFER_MIN} and {OFFER_MAX}")
        self.offer_grid = grid

        self.firm_outside = _checked(firm_outside, "firm outside option")

        self._outside = self._per_candidate(candidate_outside, 0)
        self._outside = {k: _checked(v, f"outside option of {k or 'candidates'}") for k, v in self._outside.items()}

        self._surplus = {k: to_rational(v) for k, v in self._per_candidate(surplus, DEFAULT_SURPLUS).items()}
        self.need_penalty = to_rational(need_penalty)

        tie_break = tie_break or get_tie_break()
        try:
            validate_tie_break(tie_break)
        except ValueError as exc:
            raise MarketError(exc)
        self.tie_break = tie_break

    @staticmethod
    def _per_candidate(value: Any, default: Any) -> dict:
        if isinstance(value, Mapping):
            values = dict(value)
            values.setdefault(None, default)
            return values
        return {None: value}

    @classmethod
    def from_step(cls, step: Any, **kwargs) -> MarketSpec:
        """Create spec whose grid runs from 0 to 3 with given step."""
        try:
            grid = offer_grid(step)
        except ValueError as exc:
            raise MarketError(exc)
        return cls(grid, **kwargs)

    def outside_of(self, candidate: str) -> Fraction:
        """Get true outside option of a candidate."""
        return self._outside.get(candidate, self._outside[None])

    def surplus_of(self, candidate: str) -> Fraction:
        """Get surplus generated when a candidate is matched."""
        return self._surplus.get(candidate, self._surplus[None])

    def candidate_actions(self) -> tuple:
        if self.tie_break == ACCEPT:
            return (ACCEPT, REJECT)
        return (REJECT, ACCEPT)

    def accept_payoffs(self, candidate: str, offer: Fraction) -> tuple:
        """Get ``(firm, candidate)`` payoffs when an offer is accepted."""
        surplus = self.surplus_of(candidate)
        return surplus - offer - self.need_penalty, offer + self.need_penalty

    def reject_payoffs(self, firm_outside: Fraction, candidate_outside: Fraction) -> tuple:
        """Get ``(firm, candidate)`` payoffs when the market pays outside options."""
        return MARKET_SURPLUS - firm_outside - self.need_penalty, candidate_outside + self.need_penalty

    def market_action(self, candidate: str) -> tuple:
        """Get true outside-option pair the market plays for a candidate."""
        return (self.firm_outside, self.outside_of(candidate))

    def nature_actions(self, candidate: str) -> tuple:
        """Get outside-option pairs the market may play: the grid squared plus the true pair."""
        pairs = {(f, x) for f in self.offer_grid for x in self.offer_grid}
        pairs.add(self.market_action(candidate))
        return tuple(sorted(pairs))

    def describe(self) -> dict:
        return {
            "offer_grid": list(self.offer_grid),
            "firm_outside": self.firm_outside,
            "candidate_outside": {str(k) if k is not None else "default": v for k, v in self._outside.items()},
            "surplus": {str(k) if k is not None else "default": v for k, v in self._surplus.items()},
            "need_penalty": self.need_penalty,
            "tie_break": self.tie_break,
        }


def candidate_key(candidate: str, offer: Fraction) -> str:
    """Get key of the information set where a candidate faces an offer."""
    return f"{candidate}@{format_rational(offer)}"


class MarketGame(GameTree):
    """Game tree of a hiring market, aware of the market it was built from.

    Subclass **MUST** implement :meth:`decisions`.
    """

    kind = ""

    def __init__(self, spec: MarketSpec, candidates: Iterable[str], offers: Iterable[Fraction], root: Node, information_sets, nature_strategy: BehaviorStrategy):
        self.spec = spec
        self.candidates = tuple(candidates)
        self.offers = tuple(offers)
        super().__init__(
            (FIRM,) + self.candidates,
            root,
            information_sets=information_sets,
            nature=MARKET,
            nature_strategy=nature_strategy,
        )

    def market_key(self, candidate: str) -> str:
        """Get key of the market information set following a rejection."""
        raise NotImplementedError

    def decisions(self, history: tuple) -> dict:
        """Get accept/reject decision of every candidate along a leaf history."""
        raise NotImplementedError


class OutsideOptionBeliefs(NamedTuple):
    """Beliefs about outside options in a bilateral market.

    ``o_f_f`` and ``o_f_x`` are what the firm believes the firm's and the
    candidate's outside options are; ``o_x_x`` and ``o_x_f`` are the
    candidate's counterparts. The firm also believes the candidate accepts
    offers at or above ``threshold`` and the candidate believes it will be
    offered ``believed_offer``.
    """

    o_f_f: Fraction
    o_f_x: Fraction
    o_x_x: Fraction
    o_x_f: Fraction
    threshold: Fraction
    believed_offer: Fraction

    @classmethod
    def create(cls, o_f_f: Any, o_f_x: Any, o_x_x: Any, o_x_f: Any = OFFER_MAX, threshold: Any = None, believed_offer: Any = None) -> OutsideOptionBeliefs:
        """Create validated beliefs; threshold and believed offer default to ``o_f_x``."""
        o_f_x = to_rational(o_f_x)
        threshold = o_f_x if threshold is None else threshold
        believed_offer = o_f_x if believed_offer is None else believed_offer
        return cls(
            _checked(o_f_f, "o_f(f)"),
            _checked(o_f_x, "o_f(x)"),
            _checked(o_x_x, "o_x(x)"),
            _checked(o_x_f, "o_x(f)"),
            _checked(threshold, "acceptance threshold"),
            _checked(believed_offer, "believed offer"),
        )

    def to_beliefs(self, game: MarketGame, candidate: Optional[str] = None) -> dict:
        """Expand shorthand into point-mass beliefs of the firm and the candidate.

        :param game: Bilateral market.
        :param candidate: Candidate of the market (defaults to its only candidate).
        :returns: A ``dict`` of player to :class:`~pyfair.marketlib.equilibrium.beliefs.Beliefs`.
        """
        from pyfair.marketlib.equilibrium.beliefs import Beliefs
        from pyfair.marketlib.market.policies import (
            firm_offer,
            threshold_policy,
        )

        if game.kind != "bilateral":
            raise MarketError("Outside-option beliefs describe bilateral markets only")
        candidate = candidate or game.candidates[0]
        if candidate not in game.candidates:
            raise MarketError(f"Unknown candidate {candidate}")

        key = game.market_key(candidate)
        actions = game.information_sets[key].actions
        for pair in ((self.o_f_f, self.o_f_x), (self.o_x_f, self.o_x_x)):
            if pair not in actions:
                raise MarketError(f"Market cannot play outside options {tuple(map(format_rational, pair))}")
        if self.believed_offer not in game.offers:
            raise MarketError(f"Believed offer {self.believed_offer} is not on the offer grid")

        firm = Beliefs(FIRM, {
            candidate: threshold_policy(game, candidate, self.threshold),
            MARKET: BehaviorStrategy(MARKET, {key: Distribution.point((self.o_f_f, self.o_f_x))}),
        })
        believer = Beliefs(candidate, {
            FIRM: firm_offer(game, self.believed_offer),
            MARKET: BehaviorStrategy(MARKET, {key: Distribution.point((self.o_x_f, self.o_x_x))}),
        })
        return {FIRM: firm, candidate: believer}

    def to_dict(self) -> dict:
        return self._asdict()


class EquilibriumOutcome(NamedTuple):
    """Profile together with its payoffs and which candidates were matched."""

    profile: StrategyProfile
    payoffs: dict
    matched: dict
    surplus: dict

    @classmethod
    def from_profile(cls, game: MarketGame, profile: StrategyProfile) -> EquilibriumOutcome:
        """Evaluate profile; every candidate must accept with probability zero or one."""
        accepted = {c: Fraction(0) for c in game.candidates}
        for history, prob in outcome_distribution(game, profile).items():
            for candidate, action in game.decisions(history).items():
                if action == ACCEPT:
                    accepted[candidate] += prob

        matched = {}
        for candidate, prob in accepted.items():
            if prob not in (0, 1):
                raise MarketError(f"Candidate {candidate} is matched with probability {prob}")
            matched[candidate] = prob == 1

        return cls(
            profile,
            evaluate_profile(game, profile),
            matched,
            {c: game.spec.surplus_of(c) for c in game.candidates},
        )
