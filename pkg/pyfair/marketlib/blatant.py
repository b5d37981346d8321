"""This module contains blatant unfairness checks over equilibrium sets.

An equilibrium is blatantly unfair to a player who gets a non-positive
payoff there while another equilibrium of the same set gives them a
positive one without hurting anyone else in the sense below. In games with
two payoff-bearing players the alternative must make both players
positive; with more players every other player must either keep at least
their payoff or end up positive.

Verdicts only range over the given set, so a missing flag means "not
blatantly unfair within the searched space".
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import (
    Any,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
)

from pyfair.marketlib.equilibrium.beliefs import BeliefGrid
from pyfair.marketlib.equilibrium.enumerate import enumerate_equilibria
from pyfair.marketlib.game.analysis import evaluate_profile
from pyfair.marketlib.game.strategy import (
    PureStrategy,
    StrategyProfile,
)
from pyfair.marketlib.game.tree import GameTree
from pyfair.marketlib.validators import validate_concept

logger = logging.getLogger(__name__)


class BlatantError(ValueError):
    """Class to mark a query about a player or equilibrium outside the given set."""

    pass


class Member(NamedTuple):
    """Equilibrium of a set with its payoffs and (for SCE) supporting beliefs."""

    profile: StrategyProfile
    payoffs: dict
    beliefs: Optional[dict] = None


class EquilibriumSet:
    """Equilibria of one game under one solution concept.

    :param game: Game the equilibria belong to.
    :param concept: ``nash`` or ``sce``.
    :param members: Equilibria in enumeration order.
    :param belief_space: Description of the belief space searched (``correct beliefs`` under Nash).
    """

    def __init__(self, game: GameTree, concept: str, members: Sequence[Member], belief_space: str = ""):
        validate_concept(concept)
        self.game = game
        self.concept = concept
        self.members = tuple(members)
        self.belief_space = belief_space

    @classmethod
    def enumerate(
        cls,
        game: GameTree,
        concept: str,
        belief_space: Optional[BeliefGrid] = None,
        budget: Optional[int] = None,
        strategy_sets: Optional[Mapping[str, Sequence[PureStrategy]]] = None,
        search_budget: Optional[int] = None,
    ) -> EquilibriumSet:
        """Enumerate pure equilibria and record their payoffs."""
        found = enumerate_equilibria(game, concept, belief_space, budget, strategy_sets, search_budget)
        members = [Member(profile, evaluate_profile(game, profile), beliefs) for profile, beliefs in found]
        described = "correct beliefs"
        if concept == "sce":
            described = (belief_space or BeliefGrid(game)).describe()
        return cls(game, concept, members, described)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def index(self, eq: Any) -> int:
        """Get position of a member (or of the member playing a profile)."""
        profile = eq.profile if isinstance(eq, Member) else eq
        for i, member in enumerate(self.members):
            if member.profile == profile:
                return i
        raise BlatantError("Equilibrium is not a member of the set")

    def _check_player(self, player: str) -> None:
        if player not in self.game.players:
            raise BlatantError(f"Player {player} is not a payoff-bearing player of the game")


class BlatantVerdict(NamedTuple):
    """Verdict of a blatant unfairness check; ``witness`` is the alternative equilibrium."""

    holds: bool
    witness: Optional[Member] = None


class Flag(NamedTuple):
    """Equilibrium found blatantly unfair to a player, with its witness."""

    index: int
    member: Member
    player: str
    witness: Member


def welfare_preferred(alternative: Mapping[str, Fraction], current: Mapping[str, Fraction], players: Optional[Sequence[str]] = None) -> bool:
    """Check that moving from ``current`` to ``alternative`` payoffs harms nobody blatantly.

    Every player either gets at least as much as before or ends up
    positive, so players who were negative never lose and players who were
    positive stay positive.
    """
    players = players if players is not None else list(current)
    return all(alternative[p] >= current[p] or alternative[p] > 0 for p in players)


def _best_witness(qualifying: list) -> Optional[Member]:
    best, best_value = None, None
    for member in qualifying:
        worst = min(member.payoffs.values())
        if best is None or worst > best_value:
            best, best_value = member, worst
    return best


def is_blatantly_unfair_two_player(eqset: EquilibriumSet, eq: Any, player: str) -> BlatantVerdict:
    """Check blatant unfairness in a game of two payoff-bearing players.

    Holds iff ``player`` gets at most 0 at ``eq`` and some member of the set
    gives both players strictly positive payoffs.

    :param eqset: Equilibrium set.
    :param eq: Member of the set (or its profile).
    :param player: Payoff-bearing player.
    :returns: Verdict whose witness maximises the smaller payoff (earliest on ties).
    """
    eqset._check_player(player)
    if len(eqset.game.players) != 2:
        raise BlatantError(f"Game has {len(eqset.game.players)} payoff-bearing players; expected 2")
    member = eqset.members[eqset.index(eq)]
    if member.payoffs[player] > 0:
        return BlatantVerdict(False)

    qualifying = [m for m in eqset.members if all(v > 0 for v in m.payoffs.values())]
    witness = _best_witness(qualifying)
    return BlatantVerdict(witness is not None, witness)


def is_blatantly_unfair_multi(eqset: EquilibriumSet, eq: Any, player: str) -> BlatantVerdict:
    """Check blatant unfairness in a game of any number of players.

    Holds iff ``player`` gets at most 0 at ``eq`` and some member gives them
    a positive payoff while every other player gets at least their payoff at
    ``eq`` or a positive one.
    """
    eqset._check_player(player)
    member = eqset.members[eqset.index(eq)]
    if member.payoffs[player] > 0:
        return BlatantVerdict(False)

    others = [p for p in eqset.game.players if p != player]
    qualifying = [
        m for m in eqset.members
        if m.payoffs[player] > 0 and welfare_preferred(m.payoffs, member.payoffs, others)
    ]
    witness = _best_witness(qualifying)
    return BlatantVerdict(witness is not None, witness)


def blatant_flags(eqset: EquilibriumSet) -> list[Flag]:
    """Apply the fitting definition to every member and player of a set."""
    check = is_blatantly_unfair_two_player if len(eqset.game.players) == 2 else is_blatantly_unfair_multi
    flags = []
    for i, member in enumerate(eqset.members):
        for player in eqset.game.players:
            verdict = check(eqset, member, player)
            if verdict.holds:
                flags.append(Flag(i, member, player, verdict.witness))
    logger.info(f"{len(flags)} blatant unfairness flag(s) among {len(eqset)} equilibria")
    return flags


def detect_blatant_unfairness(
    game: GameTree,
    concept: str,
    belief_space: Optional[BeliefGrid] = None,
    budget: Optional[int] = None,
    strategy_sets: Optional[Mapping[str, Sequence[PureStrategy]]] = None,
    search_budget: Optional[int] = None,
) -> list[Flag]:
    """Enumerate equilibria of a game and flag every blatantly unfair (equilibrium, player) pair.

    .. code-block:: python

        flags = detect_blatant_unfairness(game, "sce", market_belief_grid(game))

    :returns: A ``list`` of :class:`Flag` in enumeration order, players in game order.
    """
    eqset = EquilibriumSet.enumerate(game, concept, belief_space, budget, strategy_sets, search_budget)
    return blatant_flags(eqset)
