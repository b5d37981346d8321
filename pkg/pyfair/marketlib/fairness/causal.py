"""This module contains discrete structural causal models and counterfactual fairness.

Counterfactuals are computed exactly: exogenous noise is conditioned on the
observed features and sensitive value by enumerating every noise
configuration (abduction), the sensitive node is fixed to its alternative
value (intervention) and descendants are recomputed before the decision
function is applied (prediction).
"""

from __future__ import annotations

import logging
from collections import defaultdict
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

import networkx as nx

from pyfair.marketlib.fairness.population import (
    Classifier,
    FairnessVerdict,
    Population,
)
from pyfair.marketlib.game.strategy import Distribution
from pyfair.marketlib.utils import sort_key

logger = logging.getLogger(__name__)


class CausalModelError(ValueError):
    """Class to mark malformed causal models or impossible conditioning."""

    pass


#: Structural function as callable of parent values or table keyed by the tuple of parent values.
Structural = Union[Callable[[Mapping], Any], Mapping[tuple, Any]]


class StructuralCausalModel:
    """Discrete structural causal model.

    .. code-block:: python

        scm = StructuralCausalModel(
            parents={"A": ["UA"], "X": ["UX"], "D": ["X"]},
            functions={"A": {(0,): 0, (1,): 1}, "X": {(0,): 0, (1,): 1}},
            noise={"UA": Distribution.uniform([0, 1]), "UX": Distribution.uniform([0, 1])},
            features=["X"],
        )

    :param parents: Parents of every endogenous node (in argument order of its function).
    :param functions: Structural function of every endogenous node except the decision.
    :param noise: Finite-support distribution of every exogenous node.
    :param features: Nodes forming the feature vector, in order.
    :param sensitive: Sensitive attribute node.
    :param decision: Decision node; its function is supplied by the classifier.
    """

    def __init__(
        self,
        parents: Mapping[str, Sequence[str]],
        functions: Mapping[str, Structural],
        noise: Mapping[str, Distribution],
        features: Sequence[str],
        sensitive: str = "A",
        decision: str = "D",
    ):
        self.parents = {node: tuple(ps) for node, ps in parents.items()}
        self.functions = dict(functions)
        self.noise = {node: d if isinstance(d, Distribution) else Distribution(d) for node, d in noise.items()}
        self.features = tuple(features)
        self.sensitive = sensitive
        self.decision = decision

        self.graph = nx.DiGraph()
        self.graph.add_nodes_from(self.noise)
        self.graph.add_nodes_from(self.parents)
        for node, ps in self.parents.items():
            self.graph.add_edges_from((p, node) for p in ps)

        if not nx.is_directed_acyclic_graph(self.graph):
            raise CausalModelError("Causal graph has a cycle")

        overlap = set(self.noise) & set(self.parents)
        if overlap:
            raise CausalModelError(f"Exogenous node(s) {sorted(overlap)} cannot have parents")
        unknown = [n for n in self.graph if n not in self.noise and n not in self.parents]
        if unknown:
            raise CausalModelError(f"Node(s) {sorted(unknown)} are neither exogenous nor endogenous")
        for node in list(self.features) + [sensitive]:
            if node not in self.parents:
                raise CausalModelError(f"Node {node} must be endogenous")
        for node in self.parents:
            if node != decision and node not in self.functions:
                raise CausalModelError(f"Node {node} has no structural function")

        self.order = [n for n in nx.lexicographical_topological_sort(self.graph) if n in self.parents and n != decision]

    @property
    def has_decision(self) -> bool:
        return self.decision in self.graph

    def out_degree(self, node: str) -> int:
        return self.graph.out_degree(node)

    def noise_configurations(self) -> Iterator[tuple[Fraction, dict]]:
        """Iterate every noise configuration with its probability."""
        nodes = sorted(self.noise)
        for combo in product(*(list(self.noise[n].items()) for n in nodes)):
            prob = Fraction(1)
            values = {}
            for node, (value, p) in zip(nodes, combo):
                values[node] = value
                prob *= p
            yield prob, values

    def _evaluate(self, node: str, values: Mapping) -> Any:
        function = self.functions[node]
        args = tuple(values[p] for p in self.parents[node])
        if isinstance(function, Mapping):
            try:
                return function[args]
            except KeyError:
                raise CausalModelError(f"Structural function of {node} is undefined at {args!r}")
        return function({p: values[p] for p in self.parents[node]})

    def solve(self, noise: Mapping, interventions: Optional[Mapping] = None) -> dict:
        """Compute every endogenous value (except the decision) from noise, honouring interventions."""
        interventions = interventions or {}
        values = dict(noise)
        for node in self.order:
            values[node] = interventions[node] if node in interventions else self._evaluate(node, values)
        return values

    def feature_vector(self, values: Mapping) -> tuple:
        return tuple(values[f] for f in self.features)

    def sensitive_values(self) -> tuple:
        """Get values the sensitive node takes with positive probability."""
        seen = {self.solve(noise)[self.sensitive] for _, noise in self.noise_configurations()}
        return tuple(sorted(seen, key=sort_key))

    def decision_inputs(self, values: Mapping) -> dict:
        """Get values visible to the decision node."""
        if not self.has_decision:
            raise CausalModelError(f"Causal graph has no decision node {self.decision}")
        return {p: values[p] for p in self.parents.get(self.decision, ())}


class DecisionFunction:
    """Structural function of the decision node.

    :param function: Callable receiving the values of the decision's parents
        and returning a decision or a distribution over decisions.
    """

    def __init__(self, function: Callable[[Mapping], Any]):
        self.function = function

    @classmethod
    def from_table(cls, table: Mapping[tuple, Any], parents: Sequence[str]) -> DecisionFunction:
        parents = tuple(parents)

        def function(values: Mapping) -> Any:
            key = tuple(values[p] for p in parents)
            try:
                return table[key]
            except KeyError:
                raise CausalModelError(f"Decision table is undefined at {key!r}")
        return cls(function)

    @classmethod
    def from_classifier(cls, classifier: Classifier, population: Population, features: Sequence[str]) -> DecisionFunction:
        """Read the classifier as a function of the feature vector."""
        features = tuple(features)

        def function(values: Mapping) -> Any:
            try:
                vector = tuple(values[f] for f in features)
            except KeyError as exc:
                raise CausalModelError(f"Decision node does not observe feature {exc.args[0]}")
            candidate = population.by_features(vector)
            if candidate is None:
                if classifier.default is None:
                    raise CausalModelError(f"No candidate has feature vector {vector!r}")
                return classifier.default
            return classifier.decision(candidate.id)
        return cls(function)

    def __call__(self, values: Mapping) -> Distribution:
        decision = self.function(values)
        if isinstance(decision, Distribution):
            return decision
        return Distribution.point(decision)


def _posterior(scm: StructuralCausalModel, features: tuple, sensitive: Any) -> list[tuple[Fraction, dict]]:
    consistent = []
    for prob, noise in scm.noise_configurations():
        values = scm.solve(noise)
        if scm.feature_vector(values) == tuple(features) and values[scm.sensitive] == sensitive:
            consistent.append((prob, noise))
    total = sum((p for p, _ in consistent), Fraction(0))
    if total == 0:
        raise CausalModelError(f"Observation X={features!r}, {scm.sensitive}={sensitive!r} has probability zero")
    return [(p / total, noise) for p, noise in consistent]


def counterfactual_output(scm: StructuralCausalModel, decision: DecisionFunction, features: tuple, sensitive: Any, alternative: Any) -> Distribution:
    """Get the decision distribution had the sensitive attribute been ``alternative``.

    :param scm: Causal model.
    :param decision: Structural function of the decision node.
    :param features: Observed feature vector.
    :param sensitive: Observed sensitive value.
    :param alternative: Value the sensitive node is set to.
    :returns: Exact distribution over decisions.
    """
    masses: dict = defaultdict(Fraction)
    for weight, noise in _posterior(scm, features, sensitive):
        values = scm.solve(noise, {scm.sensitive: alternative})
        for d, p in decision(scm.decision_inputs(values)).items():
            masses[d] += weight * p
    return Distribution(masses)


def observation_probability(scm: StructuralCausalModel, features: tuple, sensitive: Any) -> Fraction:
    """Get probability of observing a feature vector with a sensitive value."""
    total = Fraction(0)
    for prob, noise in scm.noise_configurations():
        values = scm.solve(noise)
        if scm.feature_vector(values) == tuple(features) and values[scm.sensitive] == sensitive:
            total += prob
    return total


def check_counterfactual_fairness(
    scm: StructuralCausalModel,
    classifier: Union[Classifier, DecisionFunction],
    population: Population,
) -> FairnessVerdict:
    """Check that no candidate's decision distribution changes under intervention on the sensitive node.

    Candidates whose observation has probability zero under the model are skipped.

    :returns: Verdict whose witness is ``(candidate, a, a', d)`` with ``d`` the
        first decision whose probability changes.
    """
    if isinstance(classifier, Classifier):
        decision = DecisionFunction.from_classifier(classifier, population, scm.features)
    else:
        decision = classifier

    alternatives = scm.sensitive_values()
    for candidate in sorted(population, key=lambda c: c.id):
        if observation_probability(scm, candidate.features, candidate.sensitive) == 0:
            logger.debug(f"Skipping {candidate.id}: observation has probability zero")
            continue
        factual = counterfactual_output(scm, decision, candidate.features, candidate.sensitive, candidate.sensitive)
        for alternative in alternatives:
            if alternative == candidate.sensitive:
                continue
            other = counterfactual_output(scm, decision, candidate.features, candidate.sensitive, alternative)
            if other != factual:
                changed = next(
                    d for d in sorted(set(factual) | set(other), key=sort_key)
                    if factual.probability(d) != other.probability(d)
                )
                return FairnessVerdict(False, (candidate.id, candidate.sensitive, alternative, changed))
    return FairnessVerdict(True)


def check_no_taste_based(scm: StructuralCausalModel) -> FairnessVerdict:
    """Check that the causal graph has no edge from the sensitive attribute to the decision."""
    if not scm.has_decision:
        raise CausalModelError(f"Causal graph has no decision node {scm.decision}")
    if scm.graph.has_edge(scm.sensitive, scm.decision):
        return FairnessVerdict(False, (scm.sensitive, scm.decision))
    return FairnessVerdict(True)
