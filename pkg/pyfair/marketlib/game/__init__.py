# noqa: D104
from pyfair.marketlib.game.strategy import (  # noqa: F401
    BehaviorStrategy,
    Distribution,
    DistributionError,
    MixedStrategy,
    PureStrategy,
    StrategyProfile,
)
from pyfair.marketlib.game.tree import (  # noqa: F401
    GameError,
    GameTree,
    InformationSet,
    Node,
    PerfectRecallError,
)
from pyfair.marketlib.game.analysis import (  # noqa: F401
    best_response,
    evaluate_profile,
    expected_utility_under_belief,
    outcome_distribution,
    reached_information_sets,
    to_behavior,
)
