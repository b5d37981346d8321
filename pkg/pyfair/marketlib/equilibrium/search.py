"""This module contains the self-confirming belief witness search.

Beliefs of different players are independent (unitary SCE), so the search
runs player by player. For a player, beliefs are forced to the truth on the
information sets their own play reaches; every other opponent information
set is free and ranges over the belief grid. Free sets are only assigned
when the best-response traversal actually meets them.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Optional,
)

from pyfair.marketlib.equilibrium.beliefs import (
    BeliefError,
    BeliefGrid,
    Beliefs,
    true_behaviors,
)
from pyfair.marketlib.equilibrium.checks import check_player_sce
from pyfair.marketlib.game.analysis import (
    SequenceForm,
    evaluate_profile,
    reached_information_sets,
)
from pyfair.marketlib.game.strategy import (
    BehaviorStrategy,
    Distribution,
    StrategyProfile,
    pure_support,
)
from pyfair.marketlib.game.tree import (
    GameTree,
    InformationSet,
    Node,
)
from pyfair.marketlib.settings import get_search_budget

logger = logging.getLogger(__name__)


class BudgetExceededError(RuntimeError):
    """Class to mark a search or enumeration that would exceed its budget."""

    pass


def resolve_budget(budget: Optional[int], default: Callable[[], int], name: str = "budget") -> int:
    """Get given budget, or the configured one when omitted; budgets below 1 are rejected."""
    if budget is None:
        budget = default()
    if budget < 1:
        raise ValueError(f"Invalid {name} {budget}; must be at least 1")
    return budget


class _Unassigned(Exception):
    def __init__(self, infoset: InformationSet):
        super().__init__(infoset.key)
        self.infoset = infoset


class _PlayerSearch:
    """Witness search for a single player."""

    def __init__(self, game: GameTree, profile: StrategyProfile, player: str, space: BeliefGrid, behaviors: dict, budget: int):
        self.game = game
        self.player = player
        self.space = space
        self.behaviors = behaviors
        self.budget = budget
        self.evaluations = 0

        self.forced: dict = {}
        self.threshold: Optional[Fraction] = None
        for _, strategy in pure_support(profile[player]):
            sub = profile.replace(player, strategy)
            for key in reached_information_sets(game, sub):
                owner = game.information_sets[key].player
                if owner != player:
                    self.forced[key] = behaviors[owner].behavior(key)
            value = evaluate_profile(game, sub)[player]
            if self.threshold is None or value < self.threshold:
                self.threshold = value

    def _lookup(self, assignment: dict):
        def lookup(infoset: InformationSet) -> Distribution:
            key = infoset.key
            if key in self.forced:
                return self.forced[key]
            try:
                return Distribution.point(assignment[key])
            except KeyError:
                raise _Unassigned(infoset)
        return lookup

    def best_value(self, assignment: dict) -> Fraction:
        self.evaluations += 1
        if self.evaluations > self.budget:
            raise BudgetExceededError(
                f"Belief search for {self.player} exceeded budget of {self.budget} evaluations"
            )
        form = SequenceForm(self.game, self.player).collect(self._lookup(assignment))
        return form.best()[0]

    def _pessimistic(self, node: Node, assignment: dict) -> Fraction:
        # node-wise minimax; free sets take the first action minimising the player's value
        if node.is_leaf:
            return node.payoffs[self.player]

        infoset = node.infoset
        key = infoset.key
        if infoset.player == self.player:
            return max(self._pessimistic(node.child(a), assignment) for a in infoset.actions)
        if key in self.forced:
            return sum(
                (p * self._pessimistic(node.child(a), assignment) for a, p in self.forced[key].items()),
                Fraction(0),
            )
        if key in assignment:
            return self._pessimistic(node.child(assignment[key]), assignment)

        best_value, best_action = None, None
        for action in self.space.allowed(key):
            value = self._pessimistic(node.child(action), assignment)
            if key in assignment:
                # assigned deeper on this very path
                return self._pessimistic(node.child(assignment[key]), assignment)
            if best_value is None or value < best_value:
                best_value, best_action = value, action
        assignment[key] = best_action
        return best_value

    def _filled(self, assignment: dict) -> tuple[dict, Fraction]:
        assignment = dict(assignment)
        while True:
            try:
                return assignment, self.best_value(assignment)
            except _Unassigned as exc:
                assignment[exc.infoset.key] = self.space.allowed(exc.infoset.key)[0]

    def _descend(self, assignment: dict) -> tuple[dict, Fraction]:
        assignment, current = self._filled(assignment)
        improved = True
        while improved and current > self.threshold:
            improved = False
            for key in list(assignment):
                for action in self.space.allowed(key):
                    if action == assignment[key]:
                        continue
                    trial, value = self._filled({**assignment, key: action})
                    if value < current:
                        assignment, current, improved = trial, value, True
                        break
        return assignment, current

    def _exhaust(self, assignment: dict, preferred: dict) -> Optional[dict]:
        try:
            value = self.best_value(assignment)
        except _Unassigned as exc:
            key = exc.infoset.key
            actions = list(self.space.allowed(key))
            if key in preferred and preferred[key] in actions:
                actions.remove(preferred[key])
                actions.insert(0, preferred[key])
            for action in actions:
                found = self._exhaust({**assignment, key: action}, preferred)
                if found is not None:
                    return found
            return None
        return assignment if value <= self.threshold else None

    def run(self) -> Optional[dict]:
        """Find an assignment of free information sets making every supported strategy a best response."""
        guess: dict = {}
        self._pessimistic(self.game.root, guess)
        guess, value = self._filled(guess)
        if value <= self.threshold:
            return guess

        guess, value = self._descend(guess)
        if value <= self.threshold:
            return guess

        logger.debug(f"Exhaustive belief search for {self.player}")
        return self._exhaust({}, guess)

    def to_beliefs(self, assignment: dict) -> Beliefs:
        entries: dict = {p: {} for p in self.game.all_players if p != self.player}
        for key, infoset in self.game.information_sets.items():
            if infoset.player == self.player:
                continue
            if key in self.forced:
                entries[infoset.player][key] = self.forced[key]
            elif key in assignment:
                entries[infoset.player][key] = Distribution.point(assignment[key])
            else:
                entries[infoset.player][key] = Distribution.point(self.space.allowed(key)[0])
        return Beliefs(self.player, {p: BehaviorStrategy(p, e) for p, e in entries.items()})


def find_player_witness(
    game: GameTree,
    profile: StrategyProfile,
    player: str,
    belief_space: BeliefGrid,
    search_budget: Optional[int] = None,
    behaviors: Optional[dict] = None,
) -> Optional[Beliefs]:
    """Find beliefs of one player satisfying the self-confirming conditions."""
    behaviors = behaviors if behaviors is not None else true_behaviors(game, profile)

    for proposal in belief_space.proposed(profile):
        belief = proposal.get(player)
        if belief is not None and check_player_sce(game, profile, player, belief, behaviors).holds:
            return belief

    if game.nature is None or profile.nature or game.nature_strategy:
        correct = Beliefs.correct(game, profile, player)
        if check_player_sce(game, profile, player, correct, behaviors).holds:
            return correct

    search = _PlayerSearch(game, profile, player, belief_space, behaviors, resolve_budget(search_budget, get_search_budget, "search budget"))
    assignment = search.run()
    if assignment is None:
        return None
    return search.to_beliefs(assignment)


def find_sce_witness(
    game: GameTree,
    profile: StrategyProfile,
    belief_space: BeliefGrid,
    search_budget: Optional[int] = None,
) -> Optional[dict[str, Beliefs]]:
    """Find beliefs under which a profile is a self-confirming equilibrium.

    The search is exhaustive over point-mass beliefs of the grid, so
    ``None`` is definitive within that space.

    :param game: Finite game with perfect recall.
    :param profile: Strategy profile.
    :param belief_space: Space of point-mass beliefs.
    :param search_budget: Maximum best-response evaluations per player.
    :returns: Beliefs per player, or ``None``.
    """
    if belief_space is None:
        raise BeliefError("Empty belief space")

    behaviors = true_behaviors(game, profile)
    witness: dict[str, Any] = {}
    for player in game.players:
        belief = find_player_witness(game, profile, player, belief_space, search_budget, behaviors)
        if belief is None:
            logger.debug(f"No belief witness for {player}")
            return None
        witness[player] = belief
    return witness
