"""This module contains payoff evaluation, reached sets and best responses."""

from __future__ import annotations

import logging
from collections import defaultdict
from fractions import Fraction
from itertools import product
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Iterator,
    Mapping,
    Optional,
)

from pyfair.marketlib.game.strategy import (
    BehaviorStrategy,
    Distribution,
    MixedStrategy,
    PureStrategy,
    Strategy,
    StrategyProfile,
)
from pyfair.marketlib.game.tree import (
    GameError,
    GameTree,
    InformationSet,
    Node,
)

if TYPE_CHECKING:  # pragma: no cover
    from pyfair.marketlib.equilibrium.beliefs import Beliefs

logger = logging.getLogger(__name__)

#: Callable returning the distribution over actions played at an information set.
Lookup = Callable[[InformationSet], Distribution]


def strategies_lookup(game: GameTree, strategies: Mapping[str, Any], nature: Optional[BehaviorStrategy] = None) -> Lookup:
    """Create lookup resolving behavior from per-player strategies.

    :param game: Game being played.
    :param strategies: Mapping of player to pure or behavior strategy.
    :param nature: Nature strategy overriding the game's own one.
    """
    nature = nature or strategies.get(game.nature) or game.nature_strategy

    def lookup(infoset: InformationSet) -> Distribution:
        if infoset.player == game.nature:
            if nature is None:
                raise GameError("Missing strategy for Nature")
            return nature.behavior(infoset.key)
        try:
            strategy = strategies[infoset.player]
        except KeyError:
            raise GameError(f"Missing strategy for player {infoset.player}")
        return strategy.behavior(infoset.key)
    return lookup


def _check_profile(game: GameTree, profile: StrategyProfile) -> None:
    missing = [p for p in game.players if p not in profile.strategies]
    if missing:
        raise GameError(f"Missing strategy for player(s) {', '.join(missing)}")
    unknown = [p for p in profile.strategies if p not in game.players]
    if unknown:
        raise GameError(f"Strategy given for unknown player(s) {', '.join(map(str, unknown))}")


def _pure_profiles(profile: StrategyProfile) -> Iterator[tuple[Fraction, StrategyProfile]]:
    """Expand mixed strategies into weighted profiles without mixed strategies."""
    mixed = [(p, s) for p, s in profile.strategies.items() if isinstance(s, MixedStrategy)]
    if not mixed:
        yield Fraction(1), profile
        return

    for combo in product(*(list(s.pure_support()) for _, s in mixed)):
        strategies = dict(profile.strategies)
        prob = Fraction(1)
        for (player, _), (p, pure) in zip(mixed, combo):
            strategies[player] = pure
            prob *= p
        yield prob, StrategyProfile(strategies, profile.nature)


def walk(game: GameTree, lookup: Lookup, weight: Fraction = Fraction(1)) -> Iterator[tuple[Node, tuple, Fraction]]:
    """Iterate nodes reached with positive probability.

    :returns: Iterator of ``(node, history, reach probability)``.
    """
    stack = [(game.root, (), Fraction(weight))]
    while stack:
        node, history, prob = stack.pop()
        yield node, history, prob
        if node.is_leaf:
            continue
        dist = lookup(node.infoset)
        for action, p in reversed(list(dist.items())):
            stack.append((node.child(action), history + (action,), prob * p))


def _weighted_walks(game: GameTree, profile: StrategyProfile) -> Iterator[tuple[Node, tuple, Fraction]]:
    _check_profile(game, profile)
    for weight, pure in _pure_profiles(profile):
        lookup = strategies_lookup(game, pure.strategies, pure.nature)
        yield from walk(game, lookup, weight)


def outcome_distribution(game: GameTree, profile: StrategyProfile) -> Distribution:
    """Get exact distribution over leaf histories induced by a profile."""
    masses: dict = defaultdict(Fraction)
    for node, history, prob in _weighted_walks(game, profile):
        if node.is_leaf:
            masses[history] += prob
    return Distribution(masses)


def evaluate_profile(game: GameTree, profile: StrategyProfile) -> dict[str, Fraction]:
    """Get expected payoff of every payoff-bearing player.

    .. code-block:: python

        payoffs = evaluate_profile(game, profile)
        payoffs["firm"]  # Fraction(1, 2)

    :param game: Finite game.
    :param profile: Strategy profile covering every player.
    :returns: A ``dict`` of player to exact expected payoff.
    """
    totals = {player: Fraction(0) for player in game.players}
    for node, _, prob in _weighted_walks(game, profile):
        if node.is_leaf:
            for player in game.players:
                totals[player] += prob * node.payoffs[player]
    return totals


def reached_information_sets(game: GameTree, profile: StrategyProfile) -> frozenset:
    """Get keys of information sets reached with positive probability."""
    return frozenset(
        node.infoset.key
        for node, _, _ in _weighted_walks(game, profile)
        if not node.is_leaf
    )


def to_behavior(strategy: Strategy, game: GameTree) -> BehaviorStrategy:
    """Convert a mixed strategy into an outcome-equivalent behavior strategy.

    The conversion conditions each information set on the owner's own
    earlier moves, which is only sound under perfect recall.

    :param strategy: Mixed (or already pure/behavior) strategy.
    :param game: Game with perfect recall.
    :returns: Behavior strategy of the same player.
    """
    if isinstance(strategy, BehaviorStrategy):
        return strategy
    if isinstance(strategy, PureStrategy):
        return BehaviorStrategy.from_pure(strategy)

    sequences = game.own_sequences()
    support = list(strategy.pure_support())
    entries = {}
    for infoset in game.player_information_sets(strategy.player):
        sequence = sequences.get(infoset.key, ())
        consistent = [
            (p, s) for p, s in support
            if all(s.action(k) == a for k, a in sequence)
        ]
        reach = sum((p for p, _ in consistent), Fraction(0))
        if reach == 0:
            # unreachable under this strategy; any distribution is equivalent
            consistent, reach = support, Fraction(1)

        masses: dict = defaultdict(Fraction)
        for p, s in consistent:
            masses[s.action(infoset.key)] += p / reach
        entries[infoset.key] = Distribution(masses)
    return BehaviorStrategy(strategy.player, entries)


class SequenceForm:
    """Utility of one player aggregated over their own sequences of moves.

    Opponents (and Nature) are folded into reach weights, so the player's
    best response is a small dynamic program over own information sets.
    """

    def __init__(self, game: GameTree, player: str):
        self.game = game
        self.player = player
        self.terminal: dict = defaultdict(Fraction)
        self.children: dict = {}
        self.infosets: dict = {}

    def collect(self, lookup: Lookup, weight: Fraction = Fraction(1)) -> SequenceForm:
        """Add every positive-weight path under ``lookup`` with given weight."""
        player = self.player
        stack = [(self.game.root, None, Fraction(weight))]
        while stack:
            node, sequence, w = stack.pop()
            if node.is_leaf:
                try:
                    self.terminal[sequence] += w * node.payoffs[player]
                except KeyError:
                    raise GameError(f"Leaf lacks payoff of player {player}")
                continue

            infoset = node.infoset
            if infoset.player == player:
                self.children.setdefault(sequence, {})[infoset.key] = None
                self.infosets[infoset.key] = infoset
                for action in infoset.actions:
                    stack.append((node.child(action), (infoset.key, action), w))
            else:
                for action, p in lookup(infoset).items():
                    stack.append((node.child(action), sequence, w * p))
        return self

    def value_of(self, strategy: PureStrategy) -> Fraction:
        """Get expected utility of playing a pure strategy."""
        def value(sequence) -> Fraction:
            total = self.terminal.get(sequence, Fraction(0))
            for key in self.children.get(sequence, ()):
                total += value((key, strategy.action(key)))
            return total
        return value(None)

    def best(self) -> tuple[Fraction, dict]:
        """Solve for the maximal utility.

        :returns: A ``tuple`` of best value and chosen action per reached information set.
        """
        choice: dict = {}

        def best_at(key) -> Fraction:
            infoset = self.infosets[key]
            best_value, best_action = None, None
            for action in infoset.actions:
                candidate = value((key, action))
                if best_value is None or candidate > best_value:
                    best_value, best_action = candidate, action
            choice[key] = best_action
            return best_value

        def value(sequence) -> Fraction:
            total = self.terminal.get(sequence, Fraction(0))
            for key in self.children.get(sequence, ()):
                total += best_at(key)
            return total

        return value(None), choice


def belief_form(game: GameTree, player: str, belief: Beliefs) -> SequenceForm:
    """Aggregate utility of player under beliefs into a sequence form."""
    belief.validate_for(game, player)
    form = SequenceForm(game, player)
    for prob, strategies in belief.combinations():
        form.collect(strategies_lookup(game, strategies), prob)
    return form


def expected_utility_under_belief(game: GameTree, player: str, strategy: PureStrategy, belief: Beliefs) -> Fraction:
    """Get expected utility of a pure strategy against beliefs about opponents.

    :param game: Finite game.
    :param player: Player whose utility is computed.
    :param strategy: Pure strategy of ``player``.
    :param belief: Beliefs of ``player`` covering every opponent (Nature included).
    :returns: Exact expected utility.
    """
    return belief_form(game, player, belief).value_of(strategy)


def complete_strategy(game: GameTree, player: str, choice: Mapping) -> PureStrategy:
    """Extend partial choice of actions to every information set of player."""
    actions = {
        infoset.key: choice.get(infoset.key, infoset.actions[0])
        for infoset in game.player_information_sets(player)
    }
    return PureStrategy(player, actions)


def best_response(game: GameTree, player: str, belief: Beliefs) -> tuple[Fraction, PureStrategy]:
    """Get maximal expected utility and a maximising pure strategy.

    Ties are broken toward the earliest action of each information set.

    :returns: A ``tuple`` of value and pure strategy.
    """
    value, choice = belief_form(game, player, belief).best()
    return value, complete_strategy(game, player, choice)
