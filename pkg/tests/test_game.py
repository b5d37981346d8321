from fractions import Fraction

import pytest


@pytest.mark.parametrize("masses", [
    {"a": Fraction(1, 2)},
    {"a": Fraction(1, 2), "b": Fraction(2, 3)},
    {"a": Fraction(3, 2), "b": Fraction(-1, 2)},
])
def test_distribution_invalid(masses):
    from pyfair.marketlib.game.strategy import Distribution
    from pyfair.marketlib.game.strategy import DistributionError

    with pytest.raises(DistributionError):
        Distribution(masses)


def test_distribution_drops_zero_and_merges():
    from pyfair.marketlib.game.strategy import Distribution

    dist = Distribution([("b", Fraction(1, 4)), ("a", 0), ("b", Fraction(1, 4)), ("c", Fraction(1, 2))])
    assert dist.support() == ("b", "c")
    assert dist.probability("b") == Fraction(1, 2)
    assert dist.probability("a") == 0
    assert not dist.is_point


def test_distribution_helpers():
    from pyfair.marketlib.game.strategy import Distribution

    uniform = Distribution.uniform([2, 0, 2, 1])
    assert uniform == Distribution({0: Fraction(1, 3), 1: Fraction(1, 3), 2: Fraction(1, 3)})
    assert uniform.map(lambda v: v % 2) == Distribution({0: Fraction(2, 3), 1: Fraction(1, 3)})
    assert Distribution.point("x").is_point
    assert hash(Distribution.point(1)) == hash(Distribution({1: 1}))


def test_information_set_invalid():
    from pyfair.marketlib.game.tree import GameError
    from pyfair.marketlib.game.tree import InformationSet

    with pytest.raises(GameError):
        InformationSet("h", "a", ())

    with pytest.raises(GameError):
        InformationSet("h", "a", ("L", "L"))


def test_node_invalid():
    from pyfair.marketlib.game.tree import GameError
    from pyfair.marketlib.game.tree import InformationSet
    from pyfair.marketlib.game.tree import Node

    infoset = InformationSet("h", "a", ("L", "R"))

    with pytest.raises(GameError):
        Node()

    with pytest.raises(GameError):
        Node(infoset, {"L": Node.leaf({"a": 0})})

    with pytest.raises(GameError):
        Node(infoset)


def test_unknown_player_rejected():
    from pyfair.marketlib.game.tree import GameError
    from pyfair.marketlib.game.tree import GameTree
    from pyfair.marketlib.game.tree import InformationSet
    from pyfair.marketlib.game.tree import Node

    infoset = InformationSet("h", "z", ("L",))
    with pytest.raises(GameError):
        GameTree(("a",), Node(infoset, {"L": Node.leaf({"a": 0})}))


def test_information_sets_discovered(gtoy_game):
    assert list(gtoy_game.information_sets) == ["root", "reply"]
    assert gtoy_game.count_pure_strategies("b") == 2
    assert [s.action("root") for s in gtoy_game.pure_strategies("a")] == ["L", "R"]


def test_perfect_recall_violation():
    from pyfair.marketlib.game.tree import GameTree
    from pyfair.marketlib.game.tree import InformationSet
    from pyfair.marketlib.game.tree import Node
    from pyfair.marketlib.game.tree import PerfectRecallError

    first = InformationSet("first", "a", ("L", "R"))
    second = InformationSet("second", "a", ("x", "y"))
    forgetful = Node(first, {
        action: Node(second, {"x": Node.leaf({"a": 1}), "y": Node.leaf({"a": 0})})
        for action in ("L", "R")
    })

    with pytest.raises(PerfectRecallError):
        GameTree(("a",), forgetful).check_perfect_recall()


def test_perfect_recall_bilateral(gbilateral):
    gbilateral.check_perfect_recall()


@pytest.mark.parametrize("first, second, expected", [
    ("L", "l", {"a": 1, "b": 0}),
    ("R", "l", {"a": 2, "b": 1}),
    ("R", "r", {"a": 0, "b": 2}),
])
def test_evaluate_profile(gtoy_game, gtoy_profile, first, second, expected):
    from pyfair.marketlib.game.analysis import evaluate_profile
    assert evaluate_profile(gtoy_game, gtoy_profile(first, second)) == expected


def test_mixed_profile(gtoy_game):
    from pyfair.marketlib.game.analysis import evaluate_profile
    from pyfair.marketlib.game.analysis import outcome_distribution
    from pyfair.marketlib.game.analysis import to_behavior
    from pyfair.marketlib.game.strategy import Distribution
    from pyfair.marketlib.game.strategy import MixedStrategy
    from pyfair.marketlib.game.strategy import PureStrategy
    from pyfair.marketlib.game.strategy import StrategyProfile

    mixed = MixedStrategy("a", {
        PureStrategy("a", {"root": "L"}): Fraction(1, 2),
        PureStrategy("a", {"root": "R"}): Fraction(1, 2),
    })
    profile = StrategyProfile({"a": mixed, "b": PureStrategy("b", {"reply": "l"})})

    assert evaluate_profile(gtoy_game, profile) == {"a": Fraction(3, 2), "b": Fraction(1, 2)}
    assert outcome_distribution(gtoy_game, profile) == Distribution({("L",): Fraction(1, 2), ("R", "l"): Fraction(1, 2)})
    assert to_behavior(mixed, gtoy_game).behavior("root") == Distribution.uniform(["L", "R"])


def test_missing_strategy(gtoy_game):
    from pyfair.marketlib.game.analysis import evaluate_profile
    from pyfair.marketlib.game.strategy import PureStrategy
    from pyfair.marketlib.game.strategy import StrategyProfile
    from pyfair.marketlib.game.tree import GameError

    with pytest.raises(GameError):
        evaluate_profile(gtoy_game, StrategyProfile({"a": PureStrategy("a", {"root": "L"})}))


@pytest.mark.parametrize("first, second, expected", [
    ("L", "l", frozenset({"root"})),
    ("R", "r", frozenset({"root", "reply"})),
])
def test_reached_information_sets(gtoy_game, gtoy_profile, first, second, expected):
    from pyfair.marketlib.game.analysis import reached_information_sets
    assert reached_information_sets(gtoy_game, gtoy_profile(first, second)) == expected


@pytest.mark.parametrize("second, value, action", [
    ("l", 2, "R"),
    ("r", 1, "L"),
])
def test_best_response(gtoy_game, second, value, action):
    from pyfair.marketlib.equilibrium.beliefs import Beliefs
    from pyfair.marketlib.game.analysis import best_response
    from pyfair.marketlib.game.analysis import expected_utility_under_belief
    from pyfair.marketlib.game.strategy import PureStrategy

    belief = Beliefs("a", {"b": PureStrategy("b", {"reply": second})})
    best_value, strategy = best_response(gtoy_game, "a", belief)

    assert best_value == value
    assert strategy.action("root") == action
    assert expected_utility_under_belief(gtoy_game, "a", strategy, belief) == value


def test_best_response_mixed_belief(gtoy_game):
    from pyfair.marketlib.equilibrium.beliefs import Beliefs
    from pyfair.marketlib.game.analysis import best_response
    from pyfair.marketlib.game.strategy import Distribution
    from pyfair.marketlib.game.strategy import PureStrategy

    belief = Beliefs("a", {"b": Distribution({
        PureStrategy("b", {"reply": "l"}): Fraction(1, 4),
        PureStrategy("b", {"reply": "r"}): Fraction(3, 4),
    })})
    best_value, strategy = best_response(gtoy_game, "a", belief)

    # R pays 2 * 1/4, below the sure 1 of L
    assert best_value == 1
    assert strategy.action("root") == "L"


def test_beliefs_about_self_rejected():
    from pyfair.marketlib.equilibrium.beliefs import BeliefError
    from pyfair.marketlib.equilibrium.beliefs import Beliefs
    from pyfair.marketlib.game.strategy import PureStrategy

    with pytest.raises(BeliefError):
        Beliefs("a", {"a": PureStrategy("a", {"root": "L"})})

    with pytest.raises(BeliefError):
        Beliefs("a", {"b": PureStrategy("a", {"root": "L"})})
