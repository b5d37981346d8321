# noqa: D104
from pyfair.marketlib.equilibrium.beliefs import (  # noqa: F401
    BeliefError,
    BeliefGrid,
    Beliefs,
)
from pyfair.marketlib.equilibrium.checks import (  # noqa: F401
    EquilibriumVerdict,
    FailureWitness,
    check_nash,
    check_sce,
    is_best_response,
)
from pyfair.marketlib.equilibrium.search import (  # noqa: F401
    BudgetExceededError,
    find_sce_witness,
)
from pyfair.marketlib.equilibrium.enumerate import enumerate_equilibria  # noqa: F401
