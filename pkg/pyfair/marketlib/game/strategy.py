"""This module contains distributions and strategy types of extensive-form games."""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from typing import (
    Any,
    Iterable,
    Iterator,
    Optional,
    Union,
)

from pyfair.marketlib.utils import (
    sort_key,
    to_rational,
)


class DistributionError(ValueError):
    """Class to mark invalid probability distribution."""

    pass


class Distribution(Mapping):
    """Finite-support probability distribution with exact rational masses.

    Zero masses are dropped; negative masses or a total different from
    exactly one raise :class:`DistributionError`. Outcomes are kept in
    canonical order so iteration is deterministic.

    .. code-block:: python

        from fractions import Fraction
        from pyfair.marketlib.game.strategy import Distribution

        dist = Distribution({"accept": Fraction(1, 2), "reject": Fraction(1, 2)})
        dist.probability("accept")  # Fraction(1, 2)
    """

    __slots__ = ("_probs", "_hash")

    def __init__(self, probabilities: Union[Mapping, Iterable[tuple]]):
        if isinstance(probabilities, Mapping):
            probabilities = probabilities.items()

        masses: dict = {}
        for outcome, prob in probabilities:
            prob = to_rational(prob)
            if prob < 0:
                raise DistributionError(f"Negative probability {prob} for {outcome!r}")
            if prob == 0:
                continue
            masses[outcome] = masses.get(outcome, Fraction(0)) + prob

        total = sum(masses.values(), Fraction(0))
        if total != 1:
            raise DistributionError(f"Probabilities sum to {total}; expected exactly 1")

        self._probs = dict(sorted(masses.items(), key=lambda kv: sort_key(kv[0])))
        self._hash = None

    @classmethod
    def point(cls, outcome: Any) -> Distribution:
        """Create point-mass distribution on given outcome."""
        return cls({outcome: 1})

    @classmethod
    def uniform(cls, outcomes: Iterable[Any]) -> Distribution:
        """Create uniform distribution over distinct outcomes."""
        outcomes = list(dict.fromkeys(outcomes))
        if not outcomes:
            raise DistributionError("Cannot build uniform distribution over no outcomes")
        return cls({outcome: Fraction(1, len(outcomes)) for outcome in outcomes})

    def __getitem__(self, outcome: Any) -> Fraction:
        return self._probs[outcome]

    def __iter__(self) -> Iterator:
        return iter(self._probs)

    def __len__(self) -> int:
        return len(self._probs)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._probs.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v}" for k, v in self._probs.items())
        return f"Distribution({{{inner}}})"

    def probability(self, outcome: Any) -> Fraction:
        """Get probability of outcome (zero when outside the support)."""
        return self._probs.get(outcome, Fraction(0))

    def support(self) -> tuple:
        """Get outcomes with positive probability in canonical order."""
        return tuple(self._probs)

    @property
    def is_point(self) -> bool:
        return len(self._probs) == 1

    def sort_key(self) -> tuple:
        return tuple((sort_key(k), v) for k, v in self._probs.items())

    def map(self, func) -> Distribution:
        """Push distribution forward through ``func``."""
        return Distribution((func(outcome), prob) for outcome, prob in self._probs.items())


class _Strategy:
    """Base class of strategy types.

    Must be sub-classed per implementation details.
    """

    kind = ""

    def __init__(self, player: str, entries: Mapping):
        self.player = player
        self._entries = dict(entries)
        self._hash = None

    def _key(self) -> tuple:
        return (self.kind, self.player, tuple(sorted(self._entries.items(), key=lambda kv: sort_key(kv[0]))))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, _Strategy):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def sort_key(self) -> tuple:
        return (self.kind, self.player, tuple((sort_key(k), sort_key(v)) for k, v in sorted(self._entries.items(), key=lambda kv: sort_key(kv[0]))))

    def information_sets(self) -> tuple:
        """Get keys of information sets covered by this strategy."""
        return tuple(self._entries)

    def behavior(self, key: Any) -> Distribution:
        """Get distribution over actions at given information set.

        Subclass **MUST** implement this method.
        """
        raise NotImplementedError


class PureStrategy(_Strategy):
    """Mapping from each owned information set to one action."""

    kind = "pure"

    def action(self, key: Any) -> Any:
        from pyfair.marketlib.game.tree import GameError

        try:
            return self._entries[key]
        except KeyError:
            raise GameError(f"Strategy of {self.player} has no action at information set {key!r}")

    def behavior(self, key: Any) -> Distribution:
        return Distribution.point(self.action(key))

    def as_dict(self) -> dict:
        return dict(self._entries)

    def __repr__(self) -> str:
        return f"PureStrategy({self.player!r}, {self._entries!r})"


class BehaviorStrategy(_Strategy):
    """Mapping from each owned information set to a distribution over actions."""

    kind = "behavior"

    def __init__(self, player: str, entries: Mapping):
        entries = {
            key: dist if isinstance(dist, Distribution) else Distribution(dist)
            for key, dist in dict(entries).items()
        }
        super().__init__(player, entries)

    @classmethod
    def from_pure(cls, strategy: PureStrategy) -> BehaviorStrategy:
        return cls(strategy.player, {key: Distribution.point(a) for key, a in strategy.as_dict().items()})

    def behavior(self, key: Any) -> Distribution:
        from pyfair.marketlib.game.tree import GameError

        try:
            return self._entries[key]
        except KeyError:
            raise GameError(f"Strategy of {self.player} has no behavior at information set {key!r}")

    def as_dict(self) -> dict:
        return dict(self._entries)

    def pure_support(self) -> Iterator[tuple[Fraction, PureStrategy]]:
        """Iterate pure strategies (with probability) this behavior strategy puts mass on."""
        from itertools import product

        keys = list(self._entries)
        options = [list(self._entries[key].items()) for key in keys]
        for combo in product(*options):
            prob = Fraction(1)
            actions = {}
            for key, (action, p) in zip(keys, combo):
                prob *= p
                actions[key] = action
            yield prob, PureStrategy(self.player, actions)

    def __repr__(self) -> str:
        return f"BehaviorStrategy({self.player!r}, {self._entries!r})"


class MixedStrategy:
    """Finite-support distribution over pure strategies of one player."""

    kind = "mixed"

    def __init__(self, player: str, distribution: Union[Distribution, Mapping]):
        if not isinstance(distribution, Distribution):
            distribution = Distribution(distribution)
        for strategy in distribution:
            if not isinstance(strategy, PureStrategy) or strategy.player != player:
                raise DistributionError(f"Mixed strategy of {player} must mix pure strategies of {player}")
        self.player = player
        self.distribution = distribution

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MixedStrategy):
            return NotImplemented
        return (self.player, self.distribution) == (other.player, other.distribution)

    def __hash__(self) -> int:
        return hash((self.kind, self.player, self.distribution))

    def sort_key(self) -> tuple:
        return (self.kind, self.player, self.distribution.sort_key())

    def pure_support(self) -> Iterator[tuple[Fraction, PureStrategy]]:
        for strategy, prob in self.distribution.items():
            yield prob, strategy

    def __repr__(self) -> str:
        return f"MixedStrategy({self.player!r}, {self.distribution!r})"


Strategy = Union[PureStrategy, BehaviorStrategy, MixedStrategy]


def pure_support(strategy: Strategy) -> list[tuple[Fraction, PureStrategy]]:
    """Get pure strategies (with probability) in the support of any strategy."""
    if isinstance(strategy, PureStrategy):
        return [(Fraction(1), strategy)]
    return list(strategy.pure_support())


class StrategyProfile:
    """One strategy per payoff-bearing player plus an optional Nature behavior.

    When ``nature`` is omitted the game's own Nature strategy is used.
    """

    def __init__(self, strategies: Mapping[str, Strategy], nature: Optional[BehaviorStrategy] = None):
        self.strategies = dict(strategies)
        self.nature = nature
        for player, strategy in self.strategies.items():
            if strategy.player != player:
                raise DistributionError(f"Strategy of {strategy.player} registered for {player}")

    def __getitem__(self, player: str) -> Strategy:
        return self.strategies[player]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, StrategyProfile):
            return NotImplemented
        return self.strategies == other.strategies and self.nature == other.nature

    def __hash__(self) -> int:
        return hash((frozenset(self.strategies.items()), self.nature))

    def __repr__(self) -> str:
        return f"StrategyProfile({self.strategies!r})"

    def replace(self, player: str, strategy: Strategy) -> StrategyProfile:
        """Create new profile where ``player`` plays ``strategy``."""
        strategies = dict(self.strategies)
        strategies[player] = strategy
        return StrategyProfile(strategies, self.nature)

    @property
    def is_pure(self) -> bool:
        return all(isinstance(s, PureStrategy) for s in self.strategies.values())
