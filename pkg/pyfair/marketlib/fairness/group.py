"""This module contains exact group fairness checks.

A classifier is group fair for a pair of functions ``F1``, ``F2`` of
(decision, label) when ``F1`` is independent of the sensitive attribute
given ``F2``. Statistical parity, equalized odds and sufficiency are the
presets of this family.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Mapping,
    Union,
)

from pyfair.marketlib.fairness.population import (
    Classifier,
    FairnessError,
    FairnessVerdict,
    Population,
)
from pyfair.marketlib.game.strategy import Distribution
from pyfair.marketlib.utils import sort_key

logger = logging.getLogger(__name__)

#: Function of (decision, label), or its lookup table keyed by ``(decision, label)``.
Feature = Union[Callable[[Any, Any], Any], Mapping[tuple, Any]]


def decision_of(decision: Any, label: Any) -> Any:
    return decision


def label_of(decision: Any, label: Any) -> Any:
    return label


def constant(decision: Any, label: Any) -> Any:
    return 0


def apply_feature(feature: Feature, name: str, decision: Any, label: Any) -> Any:
    """Evaluate a function of (decision, label) given as callable or table."""
    if isinstance(feature, Mapping):
        try:
            return feature[(decision, label)]
        except KeyError:
            raise FairnessError(f"{name} table has no entry for decision {decision} and label {label!r}")
    return feature(decision, label)


#: Named (F1, F2) pairs.
PRESETS = {
    "statistical_parity": (decision_of, constant),
    "equalized_odds": (decision_of, label_of),
    "sufficiency": (label_of, decision_of),
}


class GroupFairnessSpec:
    """Pair of functions ``F1``, ``F2`` of (decision, label).

    .. code-block:: python

        spec = GroupFairnessSpec.preset("equalized_odds")
        table = GroupFairnessSpec({(0, 1): 0, (3, 1): 1}, constant)

    :param f1: Callable or table keyed by ``(decision, label)``.
    :param f2: Callable or table keyed by ``(decision, label)``.
    :param name: Name used in reports.
    """

    def __init__(self, f1: Feature, f2: Feature, name: str = "custom"):
        self.f1 = f1
        self.f2 = f2
        self.name = name

    @classmethod
    def preset(cls, name: str) -> GroupFairnessSpec:
        try:
            f1, f2 = PRESETS[name]
        except KeyError:
            presets = ", ".join(PRESETS)
            raise FairnessError(f"Unsupported group fairness preset {name}; please choose one of {presets}")
        return cls(f1, f2, name)

    def first(self, decision: Any, label: Any) -> Any:
        """Evaluate ``F1``."""
        return apply_feature(self.f1, "F1", decision, label)

    def second(self, decision: Any, label: Any) -> Any:
        """Evaluate ``F2``."""
        return apply_feature(self.f2, "F2", decision, label)


def joint_distribution(population: Population, classifier: Classifier, spec: GroupFairnessSpec) -> Distribution:
    """Push candidate weights and decision probabilities through ``(F1, F2, A)``.

    :returns: Exact distribution over ``(F1 value, F2 value, sensitive value)`` triples.
    """
    masses: dict = defaultdict(Fraction)
    for candidate in population:
        for decision, prob in classifier.decision(candidate.id).items():
            key = (
                spec.first(decision, candidate.label),
                spec.second(decision, candidate.label),
                candidate.sensitive,
            )
            masses[key] += candidate.weight * prob
    return Distribution(masses)


def check_group_fairness(population: Population, classifier: Classifier, spec: GroupFairnessSpec) -> FairnessVerdict:
    """Check ``F1 ⊥ A | F2`` exactly.

    For every group ``a`` and value ``v`` with ``P(A=a, F2=v) > 0`` the
    conditional distribution of ``F1`` within the group must equal the one
    of the whole population given ``F2=v``.

    :returns: Verdict whose witness is the first ``(a, v, u)`` in canonical
        order where the group puts more mass on ``F1=u`` than the population.
    """
    joint = joint_distribution(population, classifier, spec)

    second = defaultdict(Fraction)
    group = defaultdict(Fraction)
    first_given = defaultdict(Fraction)
    cell = defaultdict(Fraction)
    for (u, v, a), prob in joint.items():
        second[v] += prob
        group[(a, v)] += prob
        first_given[(u, v)] += prob
        cell[(u, v, a)] += prob

    values = sorted({u for u, _, _ in joint}, key=sort_key)
    for a, v in sorted(group, key=lambda av: (sort_key(av[0]), sort_key(av[1]))):
        for u in values:
            within = cell.get((u, v, a), Fraction(0)) / group[(a, v)]
            overall = first_given.get((u, v), Fraction(0)) / second[v]
            if within > overall:
                logger.debug(f"{spec.name} fails for group {a!r} at F2={v!r}")
                return FairnessVerdict(False, (a, v, u))
    return FairnessVerdict(True)


def check_statistical_parity(population: Population, classifier: Classifier) -> FairnessVerdict:
    """Check that every group gets the same decision distribution."""
    return check_group_fairness(population, classifier, GroupFairnessSpec.preset("statistical_parity"))


def check_equalized_odds(population: Population, classifier: Classifier) -> FairnessVerdict:
    """Check that decisions are independent of the group given the label."""
    return check_group_fairness(population, classifier, GroupFairnessSpec.preset("equalized_odds"))


def check_sufficiency(population: Population, classifier: Classifier) -> FairnessVerdict:
    """Check that labels are independent of the group given the decision (fair calibration)."""
    return check_group_fairness(population, classifier, GroupFairnessSpec.preset("sufficiency"))
