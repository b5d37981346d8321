# noqa: D104
from pyfair.marketlib.fairness.population import (  # noqa: F401
    Candidate,
    Classifier,
    FairnessError,
    FairnessVerdict,
    Population,
)
from pyfair.marketlib.fairness.group import (  # noqa: F401
    GroupFairnessSpec,
    check_equalized_odds,
    check_group_fairness,
    check_statistical_parity,
    check_sufficiency,
    joint_distribution,
)
from pyfair.marketlib.fairness.individual import (  # noqa: F401
    MetricPair,
    check_individual_fairness,
    total_variation,
)
from pyfair.marketlib.fairness.causal import (  # noqa: F401
    CausalModelError,
    DecisionFunction,
    StructuralCausalModel,
    check_counterfactual_fairness,
    check_no_taste_based,
    counterfactual_output,
)
