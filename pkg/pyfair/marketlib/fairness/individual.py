"""This module contains individual (Lipschitz) fairness checks."""

from __future__ import annotations

import logging
from fractions import Fraction
from itertools import combinations
from typing import (
    Any,
    Callable,
    Mapping,
    Optional,
    Union,
)

from pyfair.marketlib.fairness.population import (
    Candidate,
    Classifier,
    FairnessError,
    FairnessVerdict,
    Population,
)
from pyfair.marketlib.game.strategy import Distribution
from pyfair.marketlib.utils import to_rational

logger = logging.getLogger(__name__)


def total_variation(p: Distribution, q: Distribution) -> Fraction:
    """Get total variation distance of two finite-support distributions."""
    outcomes = set(p) | set(q)
    return sum((abs(p.probability(o) - q.probability(o)) for o in outcomes), Fraction(0)) / 2


def normalized_l1(x: Candidate, y: Candidate, scale: Fraction = Fraction(1)) -> Fraction:
    """Get L1 distance of feature vectors divided by their length, times ``scale``."""
    if len(x.features) != len(y.features):
        raise FairnessError(f"Candidates {x.id} and {y.id} have feature vectors of different length")
    if not x.features:
        return Fraction(0)
    distance = sum((abs(a - b) for a, b in zip(x.features, y.features)), Fraction(0))
    return scale * distance / len(x.features)


class MetricPair:
    """Distance ``M`` between decision distributions and metric ``m`` between candidates.

    Either side may be a callable or a table. The ``M`` table is keyed by
    pairs of distributions, the ``m`` table by pairs of candidate ids; each
    pair may be given in one orientation only and the diagonal defaults to 0.

    :param decision_distance: ``M``; total variation by default.
    :param candidate_metric: ``m``; normalised L1 of features times ``scale`` by default.
    :param scale: Scale of the default candidate metric.
    """

    def __init__(
        self,
        decision_distance: Optional[Union[Callable, Mapping]] = None,
        candidate_metric: Optional[Union[Callable, Mapping]] = None,
        scale: Any = 1,
    ):
        self.scale = to_rational(scale)
        self.decision_distance = decision_distance if decision_distance is not None else total_variation
        self.candidate_metric = candidate_metric

    @staticmethod
    def _lookup(table: Mapping, left: Any, right: Any, name: str) -> Fraction:
        forward, backward = table.get((left, right)), table.get((right, left))
        if forward is not None and backward is not None and to_rational(forward) != to_rational(backward):
            raise FairnessError(f"{name} table is not symmetric at ({left!r}, {right!r})")
        value = forward if forward is not None else backward
        if value is None:
            if left == right:
                return Fraction(0)
            raise FairnessError(f"{name} table has no entry for ({left!r}, {right!r})")
        value = to_rational(value)
        if value < 0:
            raise FairnessError(f"{name} table has negative entry for ({left!r}, {right!r})")
        if left == right and value != 0:
            raise FairnessError(f"{name} must vanish on ({left!r}, {left!r})")
        return value

    def decisions(self, p: Distribution, q: Distribution) -> Fraction:
        """Evaluate ``M``."""
        if isinstance(self.decision_distance, Mapping):
            return self._lookup(self.decision_distance, p, q, "M")
        return to_rational(self.decision_distance(p, q))

    def candidates(self, x: Candidate, y: Candidate) -> Fraction:
        """Evaluate ``m``."""
        if self.candidate_metric is None:
            return normalized_l1(x, y, self.scale)
        if isinstance(self.candidate_metric, Mapping):
            return self._lookup(self.candidate_metric, x.id, y.id, "m")
        return to_rational(self.candidate_metric(x, y))

    def validate(self, population: Population) -> None:
        """Check the metric axioms of ``m`` on a population.

        :raises FairnessError: A missing or negative entry, asymmetry, or a
            violated triangle inequality.
        """
        members = list(population)
        distances = {}
        for x in members:
            for y in members:
                distances[(x.id, y.id)] = self.candidates(x, y)
                if distances[(x.id, y.id)] < 0:
                    raise FairnessError(f"Metric m is negative at ({x.id}, {y.id})")

        for x, y in combinations(members, 2):
            if distances[(x.id, y.id)] != distances[(y.id, x.id)]:
                raise FairnessError(f"Metric m is not symmetric at ({x.id}, {y.id})")
        for x in members:
            for y in members:
                for z in members:
                    if distances[(x.id, z.id)] > distances[(x.id, y.id)] + distances[(y.id, z.id)]:
                        raise FairnessError(f"Metric m violates the triangle inequality at ({x.id}, {y.id}, {z.id})")


def check_individual_fairness(population: Population, classifier: Classifier, pair: Optional[MetricPair] = None) -> FairnessVerdict:
    """Check ``M(g(x), g(y)) <= m(x, y)`` for every ordered pair of candidates.

    Pairs are scanned in order of candidate id.

    :returns: Verdict whose witness is ``(x, y, M, m)`` of the first violating pair.
    """
    pair = pair or MetricPair()
    pair.validate(population)

    members = sorted(population, key=lambda c: c.id)
    decisions = classifier.decisions(population)
    for x in members:
        for y in members:
            if x.id == y.id:
                continue
            distance = pair.decisions(decisions[x.id], decisions[y.id])
            bound = pair.candidates(x, y)
            if distance > bound:
                logger.debug(f"Individual fairness fails for ({x.id}, {y.id})")
                return FairnessVerdict(False, (x.id, y.id, distance, bound))
    return FairnessVerdict(True)
