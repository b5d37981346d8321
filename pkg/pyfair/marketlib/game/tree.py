"""This module contains finite extensive-form game trees with information sets.

Nodes are materialised on first visit, so builders may describe a child
either explicitly (a mapping of action to node) or through a factory that
receives the action.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import product
from typing import (
    Any,
    Callable,
    Iterator,
    Mapping,
    Optional,
    Sequence,
    Union,
)

from pyfair.marketlib.game.strategy import (
    BehaviorStrategy,
    PureStrategy,
)

logger = logging.getLogger(__name__)


class GameError(ValueError):
    """Class to mark malformed games or strategies that do not fit a game."""

    pass


class PerfectRecallError(GameError):
    """Class to mark a game where some player forgets own earlier moves."""

    pass


class InformationSet:
    """Set of decision nodes one player cannot distinguish."""

    __slots__ = ("key", "player", "actions")

    def __init__(self, key: Any, player: str, actions: Sequence[Any]):
        actions = tuple(actions)
        if not actions:
            raise GameError(f"Information set {key!r} has no actions")
        if len(set(actions)) != len(actions):
            raise GameError(f"Information set {key!r} has duplicated actions")
        self.key = key
        self.player = player
        self.actions = actions

    def __repr__(self) -> str:
        return f"InformationSet({self.key!r}, {self.player!r})"


Children = Union[Mapping[Any, "Node"], Callable[[Any], "Node"]]


class Node:
    """Decision node or leaf of a game tree.

    A leaf carries payoffs of the payoff-bearing players; a decision node
    belongs to exactly one information set.
    """

    __slots__ = ("infoset", "payoffs", "_children", "_factory")

    def __init__(
        self,
        infoset: Optional[InformationSet] = None,
        children: Optional[Children] = None,
        payoffs: Optional[Mapping[str, Fraction]] = None,
    ):
        if (infoset is None) == (payoffs is None):
            raise GameError("Node must be either a leaf with payoffs or a decision node")

        self.infoset = infoset
        self.payoffs = {p: Fraction(v) for p, v in payoffs.items()} if payoffs is not None else None
        self._children: dict = {}
        self._factory = None

        if infoset is not None:
            if callable(children):
                self._factory = children
            elif children is not None:
                missing = [a for a in infoset.actions if a not in children]
                if missing:
                    raise GameError(f"Node at {infoset.key!r} lacks children for {missing!r}")
                self._children = dict(children)
            else:
                raise GameError(f"Decision node at {infoset.key!r} needs children")

    @classmethod
    def leaf(cls, payoffs: Mapping[str, Any]) -> Node:
        return cls(payoffs=payoffs)

    @property
    def is_leaf(self) -> bool:
        return self.infoset is None

    def child(self, action: Any) -> Node:
        """Get (and materialise) the child reached by given action.

        :param action: Action available at this node.
        :returns: Child node.
        """
        try:
            return self._children[action]
        except KeyError:
            pass

        if action not in self.infoset.actions:
            raise GameError(f"Action {action!r} is not available at information set {self.infoset.key!r}")

        node = self._factory(action)
        self._children[action] = node
        return node


class GameTree:
    """Finite complete-information extensive-form game.

    :param players: Payoff-bearing players, in canonical order.
    :param root: Root node.
    :param information_sets: Known information sets in canonical order; when
        omitted they are discovered by walking the whole tree.
    :param nature: Name of the Nature player (carries no payoffs).
    :param nature_strategy: Fixed behavior strategy of Nature.
    """

    def __init__(
        self,
        players: Sequence[str],
        root: Node,
        information_sets: Optional[Sequence[InformationSet]] = None,
        nature: Optional[str] = None,
        nature_strategy: Optional[BehaviorStrategy] = None,
    ):
        self.players = tuple(players)
        if len(set(self.players)) != len(self.players):
            raise GameError("Players must be unique")
        if nature is not None and nature in self.players:
            raise GameError(f"Nature {nature!r} cannot be a payoff-bearing player")

        self.root = root
        self.nature = nature
        self.nature_strategy = nature_strategy
        self._sequences: Optional[dict] = None

        if information_sets is None:
            information_sets = self._discover_information_sets()

        self.information_sets: dict = {}
        for infoset in information_sets:
            if infoset.key in self.information_sets:
                raise GameError(f"Duplicated information set {infoset.key!r}")
            if infoset.player not in self.players and infoset.player != nature:
                raise GameError(f"Information set {infoset.key!r} belongs to unknown player {infoset.player!r}")
            self.information_sets[infoset.key] = infoset

        if nature_strategy is not None and nature_strategy.player != nature:
            raise GameError("Nature strategy must belong to Nature")

    def _discover_information_sets(self) -> list:
        seen: dict = {}
        for node, _ in self.iter_nodes():
            if not node.is_leaf:
                known = seen.setdefault(node.infoset.key, node.infoset)
                if known.actions != node.infoset.actions or known.player != node.infoset.player:
                    raise GameError(f"Nodes of information set {node.infoset.key!r} disagree on owner or actions")
        return list(seen.values())

    @property
    def all_players(self) -> tuple:
        """Get payoff-bearing players followed by Nature (if any)."""
        if self.nature is None:
            return self.players
        return self.players + (self.nature,)

    def iter_nodes(self) -> Iterator[tuple[Node, tuple]]:
        """Iterate every node with its action history (materialises the whole tree)."""
        stack = [(self.root, ())]
        while stack:
            node, history = stack.pop()
            yield node, history
            if not node.is_leaf:
                for action in reversed(node.infoset.actions):
                    stack.append((node.child(action), history + (action,)))

    def player_information_sets(self, player: str) -> list[InformationSet]:
        """Get information sets owned by player in canonical order."""
        return [h for h in self.information_sets.values() if h.player == player]

    def pure_strategies(self, player: str) -> Iterator[PureStrategy]:
        """Iterate all pure strategies of player in lexicographic order."""
        infosets = self.player_information_sets(player)
        keys = [h.key for h in infosets]
        for combo in product(*(h.actions for h in infosets)):
            yield PureStrategy(player, dict(zip(keys, combo)))

    def count_pure_strategies(self, player: str) -> int:
        count = 1
        for infoset in self.player_information_sets(player):
            count *= len(infoset.actions)
        return count

    def own_sequences(self) -> dict:
        """Get, per information set, the owner's own earlier (information set, action) moves.

        Raises :class:`PerfectRecallError` when two nodes of one information
        set are preceded by different own moves.
        """
        if self._sequences is not None:
            return self._sequences

        sequences: dict = {}
        stack = [(self.root, {})]
        while stack:
            node, moves = stack.pop()
            if node.is_leaf:
                continue
            infoset = node.infoset
            own = tuple(moves.get(infoset.player, ()))
            if infoset.player != self.nature:
                known = sequences.setdefault(infoset.key, own)
                if known != own:
                    raise PerfectRecallError(
                        f"Player {infoset.player} does not recall own moves at information set {infoset.key!r}"
                    )
            for action in infoset.actions:
                child_moves = dict(moves)
                child_moves[infoset.player] = own + ((infoset.key, action),)
                stack.append((node.child(action), child_moves))

        self._sequences = sequences
        return sequences

    def check_perfect_recall(self) -> None:
        """Validate perfect recall of every payoff-bearing player."""
        self.own_sequences()
        logger.debug("Perfect recall holds")
