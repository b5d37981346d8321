"""This module contains belief structures and belief search spaces."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import (
    Any,
    Callable,
    Iterable,
    Iterator,
    Mapping,
    Optional,
    Union,
)

from pyfair.marketlib.game.analysis import to_behavior
from pyfair.marketlib.game.strategy import (
    BehaviorStrategy,
    Distribution,
    MixedStrategy,
    PureStrategy,
    StrategyProfile,
)
from pyfair.marketlib.game.tree import GameTree


class BeliefError(ValueError):
    """Class to mark beliefs that do not fit a game."""

    pass


class Beliefs:
    """Beliefs of one player about every opponent, Nature included.

    Each component is a finite-support distribution over the opponent's
    pure or behavior strategies; a bare strategy is read as a point mass.

    .. code-block:: python

        beliefs = Beliefs("firm", {"x": accept_all, "market": nature_strategy})
    """

    def __init__(self, owner: str, components: Mapping[str, Union[Distribution, PureStrategy, BehaviorStrategy]]):
        self.owner = owner
        self.components: dict = {}
        for opponent, component in components.items():
            if opponent == owner:
                raise BeliefError(f"Player {owner} cannot hold beliefs about themselves")
            if not isinstance(component, Distribution):
                component = Distribution.point(component)
            for strategy in component:
                if not isinstance(strategy, (PureStrategy, BehaviorStrategy)) or strategy.player != opponent:
                    raise BeliefError(f"Belief of {owner} about {opponent} must range over strategies of {opponent}")
            self.components[opponent] = component

    @classmethod
    def correct(cls, game: GameTree, profile: StrategyProfile, owner: str) -> Beliefs:
        """Create beliefs equal to the true opposing profile.

        A mixed strategy is believed through its behavior-equivalent strategy.
        """
        components: dict = {}
        for player in game.players:
            if player == owner:
                continue
            strategy = profile[player]
            components[player] = to_behavior(strategy, game) if isinstance(strategy, MixedStrategy) else strategy
        if game.nature is not None:
            nature = profile.nature or game.nature_strategy
            if nature is None:
                raise BeliefError("Game has no Nature strategy to believe in")
            components[game.nature] = nature
        return cls(owner, components)

    def validate_for(self, game: GameTree, player: Optional[str] = None) -> None:
        """Ensure beliefs cover every opponent of the owner in given game.

        :param player: When given, the beliefs must be held by this player.
        """
        if player is not None and player != self.owner:
            raise BeliefError(f"Beliefs of {self.owner} used for player {player}")
        missing = [p for p in game.all_players if p != self.owner and p not in self.components]
        if missing:
            raise BeliefError(f"Beliefs of {self.owner} miss opponent(s) {', '.join(missing)}")

    def combinations(self) -> Iterator[tuple[Fraction, dict]]:
        """Iterate joint opposing profiles with their believed probability."""
        players = list(self.components)
        supports = [list(self.components[p].items()) for p in players]
        for combo in product(*supports):
            prob = Fraction(1)
            strategies = {}
            for player, (strategy, p) in zip(players, combo):
                prob *= p
                strategies[player] = strategy
            yield prob, strategies

    def component(self, opponent: str) -> Distribution:
        try:
            return self.components[opponent]
        except KeyError:
            raise BeliefError(f"Beliefs of {self.owner} miss opponent {opponent}")

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Beliefs):
            return NotImplemented
        return self.owner == other.owner and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.owner, frozenset(self.components.items())))

    def __repr__(self) -> str:
        return f"Beliefs({self.owner!r}, {self.components!r})"


#: Callable proposing candidate beliefs (player to Beliefs) for a profile.
Proposals = Callable[[StrategyProfile], Iterable[Mapping[str, Beliefs]]]


class BeliefGrid:
    """Space of point-mass beliefs searched for self-confirming witnesses.

    :param game: Game the beliefs refer to.
    :param restrict: Optional mapping of information set key to the actions a
        belief may put mass on; unrestricted information sets allow every action.
    :param proposals: Optional callable yielding beliefs worth trying first.
    """

    def __init__(self, game: GameTree, restrict: Optional[Mapping[Any, Iterable]] = None, proposals: Optional[Proposals] = None):
        self.game = game
        self.restrict: dict = {}
        for key, actions in (restrict or {}).items():
            if key not in game.information_sets:
                raise BeliefError(f"Unknown information set {key!r} in belief space")
            available = game.information_sets[key].actions
            allowed = tuple(a for a in available if a in set(actions))
            if not allowed:
                raise BeliefError(f"Empty belief space at information set {key!r}")
            self.restrict[key] = allowed
        self.proposals = proposals

    def allowed(self, key: Any) -> tuple:
        """Get actions beliefs may assign at given information set."""
        try:
            return self.restrict[key]
        except KeyError:
            return self.game.information_sets[key].actions

    def proposed(self, profile: StrategyProfile) -> list:
        if self.proposals is None:
            return []
        return list(self.proposals(profile))

    def describe(self) -> str:
        """Get short description used in report provenance."""
        if self.restrict:
            return f"point-mass grid ({len(self.restrict)} restricted information sets)"
        return "point-mass grid"


def true_behaviors(game: GameTree, profile: StrategyProfile) -> dict:
    """Get behavior strategy of every player and Nature under a profile."""
    behaviors = {player: to_behavior(profile[player], game) for player in game.players}
    if game.nature is not None:
        nature = profile.nature or game.nature_strategy
        if nature is not None:
            behaviors[game.nature] = nature
    return behaviors
