"""This module contains Nash and self-confirming equilibrium checks."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import (
    Any,
    Mapping,
    NamedTuple,
    Optional,
)

from pyfair.marketlib.equilibrium.beliefs import (
    BeliefError,
    Beliefs,
    true_behaviors,
)
from pyfair.marketlib.game.analysis import (
    SequenceForm,
    belief_form,
    complete_strategy,
    reached_information_sets,
)
from pyfair.marketlib.game.strategy import (
    PureStrategy,
    StrategyProfile,
    pure_support,
)
from pyfair.marketlib.game.tree import GameTree

logger = logging.getLogger(__name__)


class FailureWitness(NamedTuple):
    """Why an equilibrium check failed.

    ``reason`` is ``deviation`` (``strategy`` gains ``gain`` over the checked
    one) or ``belief`` (beliefs are wrong at ``information_set``).
    """

    player: str
    reason: str
    strategy: Optional[PureStrategy] = None
    gain: Optional[Fraction] = None
    information_set: Any = None

    def to_dict(self) -> dict:
        data = {"player": self.player, "reason": self.reason}
        if self.strategy is not None:
            data["strategy"] = {str(k): v for k, v in self.strategy.as_dict().items()}
        if self.gain is not None:
            data["gain"] = self.gain
        if self.information_set is not None:
            data["information_set"] = self.information_set
        return data


class EquilibriumVerdict(NamedTuple):
    """Outcome of an equilibrium check; a failed check always carries a witness."""

    holds: bool
    witness: Optional[FailureWitness] = None


HOLDS = EquilibriumVerdict(True)


def _best_response_verdict(game: GameTree, player: str, strategy: PureStrategy, form: SequenceForm, best=None) -> EquilibriumVerdict:
    value = form.value_of(strategy)
    best_value, choice = best or form.best()
    if best_value > value:
        deviation = complete_strategy(game, player, choice)
        return EquilibriumVerdict(False, FailureWitness(player, "deviation", deviation, best_value - value))
    return HOLDS


def is_best_response(game: GameTree, player: str, strategy: PureStrategy, belief: Beliefs) -> EquilibriumVerdict:
    """Check whether a pure strategy maximises expected utility under beliefs.

    Comparison is weak, so ties never fail.

    :param game: Finite game.
    :param player: Player being checked.
    :param strategy: Pure strategy of ``player``.
    :param belief: Beliefs of ``player``.
    :returns: Verdict whose witness is a strictly better pure strategy.
    """
    return _best_response_verdict(game, player, strategy, belief_form(game, player, belief))


def check_player_sce(game: GameTree, profile: StrategyProfile, player: str, belief: Beliefs, behaviors: Optional[dict] = None) -> EquilibriumVerdict:
    """Check self-confirming conditions of one player.

    Every pure strategy in the player's support must be a best response, and
    every opposing strategy the beliefs put mass on must match true behavior
    at each information set reached when the player uses that strategy
    against the true opposing profile.
    """
    behaviors = behaviors if behaviors is not None else true_behaviors(game, profile)
    belief.validate_for(game, player)

    form = None
    best = None
    for _, strategy in pure_support(profile[player]):
        reached = reached_information_sets(game, profile.replace(player, strategy))
        for key in game.information_sets:
            if key not in reached:
                continue
            owner = game.information_sets[key].player
            if owner == player:
                continue
            truth = behaviors[owner].behavior(key)
            if any(believed.behavior(key) != truth for believed in belief.component(owner)):
                return EquilibriumVerdict(False, FailureWitness(player, "belief", information_set=key))

        if form is None:
            form = belief_form(game, player, belief)
            best = form.best()
        verdict = _best_response_verdict(game, player, strategy, form, best)
        if not verdict.holds:
            return verdict
    return HOLDS


def check_sce(game: GameTree, profile: StrategyProfile, beliefs: Mapping[str, Beliefs]) -> EquilibriumVerdict:
    """Check whether a profile is a (unitary) self-confirming equilibrium.

    :param game: Finite game with perfect recall.
    :param profile: Strategy profile.
    :param beliefs: One :class:`~pyfair.marketlib.equilibrium.beliefs.Beliefs` per payoff-bearing player.
    :returns: Verdict with failure witness (if any).
    """
    behaviors = true_behaviors(game, profile)
    for player in game.players:
        try:
            belief = beliefs[player]
        except KeyError:
            raise BeliefError(f"Missing beliefs of player {player}")
        verdict = check_player_sce(game, profile, player, belief, behaviors)
        if not verdict.holds:
            logger.debug(f"SCE fails for {player}: {verdict.witness.reason}")
            return verdict
    return HOLDS


def nash_best_value(game: GameTree, profile: StrategyProfile, player: str) -> tuple:
    """Solve best response of player against the true opposing profile."""
    return belief_form(game, player, Beliefs.correct(game, profile, player)).best()


def check_nash(game: GameTree, profile: StrategyProfile) -> EquilibriumVerdict:
    """Check whether no player has a profitable unilateral deviation.

    Nature stays fixed. Every pure strategy in a player's support must be a
    best response to the true opposing profile.
    """
    for player in game.players:
        form = belief_form(game, player, Beliefs.correct(game, profile, player))
        best = form.best()
        for _, strategy in pure_support(profile[player]):
            verdict = _best_response_verdict(game, player, strategy, form, best)
            if not verdict.holds:
                logger.debug(f"Nash fails for {player}")
                return verdict
    return HOLDS
