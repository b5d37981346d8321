"""This module contains exhaustive enumeration of pure equilibria."""

from __future__ import annotations

import logging
from itertools import product
from typing import (
    Mapping,
    Optional,
    Sequence,
)

from pyfair.marketlib.equilibrium.beliefs import (
    BeliefGrid,
    Beliefs,
    true_behaviors,
)
from pyfair.marketlib.equilibrium.checks import nash_best_value
from pyfair.marketlib.equilibrium.search import (
    BudgetExceededError,
    find_player_witness,
    resolve_budget,
)
from pyfair.marketlib.game.analysis import (
    evaluate_profile,
    reached_information_sets,
    strategies_lookup,
)
from pyfair.marketlib.game.strategy import (
    PureStrategy,
    StrategyProfile,
)
from pyfair.marketlib.game.tree import GameTree
from pyfair.marketlib.settings import get_budget
from pyfair.marketlib.validators import validate_concept

logger = logging.getLogger(__name__)


def count_profiles(game: GameTree, strategy_sets: Optional[Mapping[str, Sequence[PureStrategy]]] = None) -> int:
    """Count pure profiles enumeration would visit."""
    count = 1
    for player in game.players:
        if strategy_sets and player in strategy_sets:
            count *= len(strategy_sets[player])
        else:
            count *= game.count_pure_strategies(player)
    return count


class _Enumerator:
    def __init__(self, game: GameTree, belief_space: Optional[BeliefGrid], search_budget: Optional[int]):
        self.game = game
        self.belief_space = belief_space or BeliefGrid(game)
        self.search_budget = search_budget
        self._nash: dict = {}
        self._sce: dict = {}

    def nash(self, profile: StrategyProfile) -> bool:
        payoffs = evaluate_profile(self.game, profile)
        for player in self.game.players:
            opponents = tuple(profile[p] for p in self.game.players if p != player)
            if opponents not in self._nash:
                self._nash[opponents] = {}
            cache = self._nash[opponents]
            if player not in cache:
                cache[player] = nash_best_value(self.game, profile, player)[0]
            if payoffs[player] < cache[player]:
                return False
        return True

    def sce(self, profile: StrategyProfile) -> Optional[dict]:
        lookup = strategies_lookup(self.game, profile.strategies, profile.nature)
        reached = reached_information_sets(self.game, profile)
        signature = frozenset((key, lookup(self.game.information_sets[key])) for key in reached)

        behaviors = None
        witness: dict[str, Beliefs] = {}
        for player in self.game.players:
            cache_key = (player, signature)
            if cache_key not in self._sce:
                if behaviors is None:
                    behaviors = true_behaviors(self.game, profile)
                self._sce[cache_key] = find_player_witness(
                    self.game, profile, player, self.belief_space, self.search_budget, behaviors,
                )
            belief = self._sce[cache_key]
            if belief is None:
                return None
            witness[player] = belief
        return witness


def enumerate_equilibria(
    game: GameTree,
    concept: str,
    belief_space: Optional[BeliefGrid] = None,
    budget: Optional[int] = None,
    strategy_sets: Optional[Mapping[str, Sequence[PureStrategy]]] = None,
    search_budget: Optional[int] = None,
) -> list[tuple[StrategyProfile, Optional[dict]]]:
    """Enumerate pure equilibria of a finite game.

    Profiles are visited lexicographically (players in game order, each
    player's strategies in canonical action order). The profile count is
    checked against the budget before any work is done.

    .. code-block:: python

        for profile, beliefs in enumerate_equilibria(game, "sce", BeliefGrid(game)):
            print(profile)

    :param game: Finite game.
    :param concept: ``nash`` or ``sce``.
    :param belief_space: Belief grid searched for SCE witnesses.
    :param budget: Maximum number of profiles (defaults to `MARKETLIB_BUDGET`).
    :param strategy_sets: Optional per-player subsets of pure strategies.
    :param search_budget: Maximum best-response evaluations per belief search.
    :returns: A ``list`` of ``(profile, beliefs)``; beliefs are ``None`` for Nash.
    """
    validate_concept(concept)
    budget = resolve_budget(budget, get_budget)

    total = count_profiles(game, strategy_sets)
    if total > budget:
        raise BudgetExceededError(f"Enumeration of {total} profiles exceeds budget of {budget}")

    sets = [
        list(strategy_sets[p]) if strategy_sets and p in strategy_sets else list(game.pure_strategies(p))
        for p in game.players
    ]

    enumerator = _Enumerator(game, belief_space, search_budget)
    found = []
    for combo in product(*sets):
        profile = StrategyProfile(dict(zip(game.players, combo)))
        if concept == "nash":
            if enumerator.nash(profile):
                found.append((profile, None))
        else:
            witness = enumerator.sce(profile)
            if witness is not None:
                found.append((profile, witness))

    logger.info(f"Enumerated {total} profiles; {len(found)} {concept} equilibria")
    return found
