# noqa: D104
from pyfair.marketlib.market.spec import (  # noqa: F401
    EquilibriumOutcome,
    MarketError,
    MarketGame,
    MarketSpec,
    OutsideOptionBeliefs,
    candidate_key,
)
from pyfair.marketlib.market.bilateral import build_bilateral_market  # noqa: F401
from pyfair.marketlib.market.simultaneous import (  # noqa: F401
    apply_job_cap,
    build_simultaneous_market,
    count_capped_actions,
)
from pyfair.marketlib.market.policies import (  # noqa: F401
    firm_offer,
    market_strategy_sets,
    threshold_policies,
    threshold_policy,
)
from pyfair.marketlib.market.propositions import (  # noqa: F401
    market_belief_grid,
    market_never_plays_beliefs,
    market_never_plays_conditions,
    prop1_beliefs,
    prop1_conditions,
    prop1_profile,
    prop2_beliefs,
    prop2_conditions,
    prop2_profile,
)
from pyfair.marketlib.market.diagnostics import (  # noqa: F401
    becker_test,
    classifier_outcome,
    is_equilibrium_strategy,
    statistical_discrimination_check,
)
