"""This module contains values that are not supposedly modified."""

from fractions import Fraction

#: Lowest and highest offer (and outside option) a market accepts.
OFFER_MIN = Fraction(0)
OFFER_MAX = Fraction(3)

#: Default unit surplus of a matched pair and the disagreement penalty.
DEFAULT_SURPLUS = Fraction(1)
DEFAULT_NEED_PENALTY = Fraction(-1)

#: Surplus the firm reaps from a market hire after a rejection; the outside
#: option o(f) is the wage of that hire.
MARKET_SURPLUS = Fraction(1)

FIRM = "firm"
MARKET = "market"

ACCEPT = "accept"
REJECT = "reject"

SOLUTION_CONCEPTS = (
    "nash",
    "sce",
)

#: Beliefs an SCE witness may hold, searched grid or the truth
BELIEF_SPACES = (
    "point-mass",
    "correct",
)

STRATEGY_SPACES = (
    "full",
    "threshold",
)

TIE_BREAKS = (
    "accept",
    "reject",
)

REPORT_FORMATS = (
    "json",
    "csv",
)

# Checks understood by ``run_audit``
CHECK_IDS = (
    "statistical_parity",
    "equalized_odds",
    "sufficiency",
    "group_fairness",
    "individual_fairness",
    "counterfactual_fairness",
    "no_taste_based",
    "statistical_discrimination",
    "becker",
    "blatant_unfairness",
    "equilibrium",
    "equilibrium_strategy",
)

BELIEF_PRESETS = (
    "prop1",
    "prop2",
    "market_never_plays",
)

CONSTRUCTIONS = (
    "group_fair",
    "sufficiency",
    "constant",
)

SCENARIO_VERSION = 1
REPORT_SCHEMA_VERSION = 1
