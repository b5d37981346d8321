"""This module contains weighted candidate populations and classifiers."""

from __future__ import annotations

from fractions import Fraction
from typing import (
    Any,
    Iterable,
    Iterator,
    Mapping,
    NamedTuple,
    Optional,
    Union,
)

from pyfair.marketlib.game.strategy import Distribution
from pyfair.marketlib.utils import (
    sort_key,
    to_rational,
)


class FairnessError(ValueError):
    """Class to mark populations, classifiers or tables unfit for a fairness check."""

    pass


class FairnessVerdict(NamedTuple):
    """Outcome of a fairness check; a failed check always carries a witness."""

    holds: bool
    witness: Any = None


class Candidate(NamedTuple):
    """Candidate with features, sensitive attribute, label and weight."""

    id: str  # noqa: A003
    features: tuple
    sensitive: Any
    label: Any
    weight: Fraction


class Population:
    """Finite weighted set of candidates.

    Weights are positive and sum to exactly one; ids are unique and, since
    the feature vector identifies a candidate, so are feature vectors.
    """

    def __init__(self, candidates: Iterable[Candidate]):
        self.candidates = tuple(
            c._replace(features=tuple(to_rational(f) for f in c.features), weight=to_rational(c.weight))
            for c in candidates
        )
        if not self.candidates:
            raise FairnessError("Population is empty")

        ids = [c.id for c in self.candidates]
        if len(set(ids)) != len(ids):
            raise FairnessError("Candidate ids must be unique")

        features = [c.features for c in self.candidates]
        if len(set(features)) != len(features):
            raise FairnessError("Distinct candidates must have distinct feature vectors")

        for candidate in self.candidates:
            if candidate.weight <= 0:
                raise FairnessError(f"Candidate {candidate.id} has non-positive weight {candidate.weight}")
            if candidate.sensitive is None:
                raise FairnessError(f"Candidate {candidate.id} lacks a sensitive attribute")

        total = sum((c.weight for c in self.candidates), Fraction(0))
        if total != 1:
            raise FairnessError(f"Candidate weights sum to {total}; expected exactly 1")

        self._index = {c.id: c for c in self.candidates}

    @classmethod
    def uniform(cls, rows: Iterable[tuple]) -> Population:
        """Create population with equal weights from ``(id, features, sensitive, label)`` rows."""
        rows = list(rows)
        if not rows:
            raise FairnessError("Population is empty")
        weight = Fraction(1, len(rows))
        return cls(Candidate(id_, tuple(features), sensitive, label, weight) for id_, features, sensitive, label in rows)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.candidates)

    def __len__(self) -> int:
        return len(self.candidates)

    def __getitem__(self, id_: str) -> Candidate:
        try:
            return self._index[id_]
        except KeyError:
            raise FairnessError(f"Unknown candidate {id_}")

    @property
    def ids(self) -> tuple:
        return tuple(c.id for c in self.candidates)

    def by_features(self, features: tuple) -> Optional[Candidate]:
        """Get candidate identified by feature vector (if any)."""
        for candidate in self.candidates:
            if candidate.features == tuple(features):
                return candidate
        return None

    def groups(self) -> dict:
        """Get candidates per sensitive value in canonical order."""
        groups: dict = {}
        for candidate in sorted(self.candidates, key=lambda c: sort_key(c.sensitive)):
            groups.setdefault(candidate.sensitive, []).append(candidate)
        return groups

    def labels(self) -> tuple:
        """Get distinct labels in canonical order."""
        return tuple(sorted({c.label for c in self.candidates}, key=sort_key))


class Classifier:
    """Mapping from candidate id to a finite-support distribution over decisions.

    A ``default`` distribution serves candidates without an explicit entry,
    which is how constant classifiers are represented.
    """

    def __init__(self, assignments: Optional[Mapping[str, Union[Distribution, Any]]] = None, default: Optional[Union[Distribution, Any]] = None):
        self.assignments = {
            id_: self._as_distribution(value) for id_, value in (assignments or {}).items()
        }
        self.default = self._as_distribution(default) if default is not None else None

    @staticmethod
    def _as_distribution(value: Any) -> Distribution:
        if isinstance(value, Distribution):
            return value
        if isinstance(value, Mapping):
            return Distribution({to_rational(k): v for k, v in value.items()})
        return Distribution.point(to_rational(value))

    @classmethod
    def constant(cls, decision: Union[Distribution, Any]) -> Classifier:
        return cls(default=decision)

    def decision(self, id_: str) -> Distribution:
        """Get decision distribution of a candidate."""
        try:
            return self.assignments[id_]
        except KeyError:
            if self.default is None:
                raise FairnessError(f"Classifier has no decision for candidate {id_}")
            return self.default

    def offer(self, id_: str) -> Fraction:
        """Get the decision of a candidate the classifier treats deterministically."""
        dist = self.decision(id_)
        if not dist.is_point:
            raise FairnessError(f"Classifier randomises the decision of candidate {id_}")
        return dist.support()[0]

    def check_total(self, population: Population) -> None:
        for candidate in population:
            self.decision(candidate.id)

    def decisions(self, population: Population) -> dict:
        """Get decision distribution of every candidate of a population."""
        return {c.id: self.decision(c.id) for c in population}

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Classifier):
            return NotImplemented
        return (self.assignments, self.default) == (other.assignments, other.default)

    def __repr__(self) -> str:
        return f"Classifier({self.assignments!r}, default={self.default!r})"
