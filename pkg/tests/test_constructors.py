from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

SEEDS = (Fraction(0), Fraction(3, 4), Fraction(9, 4), Fraction(3))


@lru_cache(maxsize=None)
def anchor_market():
    from pyfair.marketlib.blatant import EquilibriumSet
    from pyfair.marketlib.market.bilateral import build_bilateral_market
    from pyfair.marketlib.market.policies import market_strategy_sets
    from pyfair.marketlib.market.propositions import market_belief_grid
    from pyfair.marketlib.market.spec import MarketSpec

    game = build_bilateral_market(MarketSpec.from_step("3/4"), "x0")
    eqset = EquilibriumSet.enumerate(
        game, "sce", market_belief_grid(game), strategy_sets=market_strategy_sets(game, "threshold"),
    )
    return game, eqset


def surjective_table(decisions, labels, size, permutations):
    """Map every label's decisions onto ``range(size)``."""
    return {
        (d, label): permutation[i] % size
        for label, permutation in zip(labels, permutations)
        for i, d in enumerate(decisions)
    }


@st.composite
def construction_cases(draw, label_count):
    size = draw(st.integers(min_value=1, max_value=5))
    labels = tuple(range(min(size, label_count) if label_count else 3))
    count = draw(st.integers(min_value=1, max_value=6))
    rows = [
        (f"x{i}", (i,), draw(st.sampled_from(["a", "b"])), draw(st.sampled_from(labels)))
        for i in range(count)
    ]
    permutations = [draw(st.permutations(range(5))) for _ in labels]
    seed = draw(st.sampled_from(SEEDS))
    return rows, labels, size, permutations, seed


@pytest.mark.parametrize("offer, player", [
    ("0", "x0"),
    ("3/4", "x0"),
    ("9/4", "firm"),
    ("3", "firm"),
])
def test_validate_seed(offer, player):
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import validate_seed

    game, eqset = anchor_market()
    flag = validate_seed(UnfairSeed.create(offer, "x0"), game, eqset)

    assert flag.player == player
    assert flag.member.profile["firm"].action("firm") == Fraction(offer)
    assert flag.witness.payoffs == {"firm": Fraction(1, 2), "x0": Fraction(1, 2)}


@pytest.mark.parametrize("seed", [
    ("3/2", "x0"),
    ("0", "x1"),
])
def test_validate_seed_rejected(seed):
    from pyfair.marketlib.constructors import HypothesisError
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import validate_seed

    game, eqset = anchor_market()
    with pytest.raises(HypothesisError):
        validate_seed(UnfairSeed.create(*seed), game, eqset)


def test_validate_seed_off_grid():
    from pyfair.marketlib.constructors import HypothesisError
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import validate_seed

    game, eqset = anchor_market()
    with pytest.raises(HypothesisError):
        validate_seed(UnfairSeed.create("1/2", "x0"), game, eqset)


def test_validate_mixed_seed():
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import validate_seed
    from pyfair.marketlib.game.strategy import Distribution
    from pyfair.marketlib.market.bilateral import build_bilateral_market
    from pyfair.marketlib.market.spec import MarketSpec

    game = build_bilateral_market(MarketSpec.from_step("1/2", firm_outside=2, candidate_outside=0), "x")
    seed = UnfairSeed.create(Distribution.uniform([Fraction(0), Fraction(2)]), "x")
    assert not seed.is_pure

    flag = validate_seed(seed, game, concept="nash")
    assert flag.player == "x"
    assert flag.member.payoffs == {"firm": 0, "x": 0}
    assert flag.witness.profile["firm"].action("firm") == Fraction(3, 2)
    assert flag.witness.payoffs == {"firm": Fraction(1, 2), "x": Fraction(1, 2)}


@given(construction_cases(label_count=None))
@settings(max_examples=200, deadline=None)
def test_group_fair_construction(case):
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import construct_group_fair_blatant
    from pyfair.marketlib.constructors import right_inverse_table
    from pyfair.marketlib.fairness.group import GroupFairnessSpec
    from pyfair.marketlib.fairness.group import check_group_fairness
    from pyfair.marketlib.fairness.group import constant
    from pyfair.marketlib.fairness.group import label_of
    from pyfair.marketlib.fairness.population import Population

    rows, labels, size, permutations, offer = case
    game, eqset = anchor_market()
    f1 = surjective_table(game.offers, labels, size, permutations)
    population = Population.uniform(rows)
    seed = UnfairSeed.create(offer, "x0")

    classifier = construct_group_fair_blatant(f1, population, seed, game.offers, game, eqset)

    assert classifier.decision("x0") == seed.strategy
    for f2 in (constant, label_of):
        assert check_group_fairness(population, classifier, GroupFairnessSpec(f1, f2)).holds
    for label in labels:
        inverse = right_inverse_table(f1, game.offers, label)
        assert sorted(inverse) == list(range(size))
        assert all(f1[(d, label)] == z for z, d in inverse.items())


@given(construction_cases(label_count=3))
@settings(max_examples=100, deadline=None)
def test_sufficiency_construction(case):
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import construct_sufficiency_blatant
    from pyfair.marketlib.fairness.group import GroupFairnessSpec
    from pyfair.marketlib.fairness.group import check_group_fairness
    from pyfair.marketlib.fairness.group import label_of
    from pyfair.marketlib.fairness.population import Population

    rows, labels, size, permutations, offer = case
    game, eqset = anchor_market()
    f2 = surjective_table(game.offers, labels, size, permutations)
    population = Population.uniform(rows)

    classifier = construct_sufficiency_blatant(f2, population, UnfairSeed.create(offer, "x0"), game.offers, game, eqset)

    assert classifier.offer("x0") == offer
    assert check_group_fairness(population, classifier, GroupFairnessSpec(label_of, f2)).holds

    revealed = {}
    for candidate in population:
        value = f2[(classifier.offer(candidate.id), candidate.label)]
        assert revealed.setdefault(value, candidate.label) == candidate.label


def test_group_fair_mixed_seed(gpopulation):
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import construct_group_fair_blatant
    from pyfair.marketlib.fairness.group import check_statistical_parity
    from pyfair.marketlib.fairness.group import decision_of
    from pyfair.marketlib.game.strategy import Distribution
    from pyfair.marketlib.utils import offer_grid

    seed = UnfairSeed.create(Distribution.uniform([Fraction(0), Fraction(2)]), "x0")
    classifier = construct_group_fair_blatant(decision_of, gpopulation, seed, offer_grid("1/2"))

    for candidate in gpopulation:
        assert classifier.decision(candidate.id) == seed.strategy
    assert check_statistical_parity(gpopulation, classifier).holds


def test_sufficiency_swaps_seed_decision():
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import construct_sufficiency_blatant
    from pyfair.marketlib.fairness.group import decision_of
    from pyfair.marketlib.fairness.population import Population

    population = Population.uniform([
        ("x0", (0,), "a", 0),
        ("x1", (1,), "b", 1),
    ])
    # the canonical injection already gives label 1 the seed decision
    classifier = construct_sufficiency_blatant(decision_of, population, UnfairSeed.create(3, "x1"), [0, 3])

    assert classifier.offer("x1") == 3
    assert classifier.offer("x0") == 0

    swapped = construct_sufficiency_blatant(decision_of, population, UnfairSeed.create(0, "x1"), [0, 3])
    assert swapped.offer("x1") == 0
    assert swapped.offer("x0") == 3


def test_sufficiency_invalid(gpopulation):
    from pyfair.marketlib.constructors import HypothesisError
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import construct_sufficiency_blatant
    from pyfair.marketlib.fairness.group import constant
    from pyfair.marketlib.fairness.group import decision_of
    from pyfair.marketlib.game.strategy import Distribution

    mixed = UnfairSeed.create(Distribution.uniform([Fraction(0), Fraction(3)]), "x0")
    with pytest.raises(HypothesisError):
        construct_sufficiency_blatant(decision_of, gpopulation, mixed, [0, 3])

    with pytest.raises(HypothesisError):
        construct_sufficiency_blatant(constant, gpopulation, UnfairSeed.create(0, "x0"), [0, 3])

    with pytest.raises(HypothesisError):
        construct_sufficiency_blatant(decision_of, gpopulation, UnfairSeed.create(1, "x0"), [0, 3])

    with pytest.raises(HypothesisError):
        construct_sufficiency_blatant(decision_of, gpopulation, UnfairSeed.create(0, "y"), [0, 3])


def test_group_fair_unreachable_value(gpopulation):
    from pyfair.marketlib.constructors import HypothesisError
    from pyfair.marketlib.constructors import UnfairSeed
    from pyfair.marketlib.constructors import construct_group_fair_blatant

    # label 0 only ever maps to 0 while label 1 also reaches 1
    f1 = {(Fraction(0), 0): 0, (Fraction(3), 0): 0, (Fraction(0), 1): 0, (Fraction(3), 1): 1}
    with pytest.raises(HypothesisError):
        construct_group_fair_blatant(f1, gpopulation, UnfairSeed.create(0, "x0"), [0, 3])


def test_right_inverse_table():
    from pyfair.marketlib.constructors import HypothesisError
    from pyfair.marketlib.constructors import right_inverse_table
    from pyfair.marketlib.fairness.group import constant

    assert right_inverse_table(constant, [3, 0], 1) == {0: 0}
    with pytest.raises(HypothesisError):
        right_inverse_table(constant, [0, 3], 1, [0, 1])


def test_construct_constant(gpopulation):
    from pyfair.marketlib.constructors import construct_constant
    from pyfair.marketlib.fairness.group import check_statistical_parity

    classifier = construct_constant("3/2")
    assert classifier.offer("x3") == Fraction(3, 2)
    assert check_statistical_parity(gpopulation, classifier).holds
