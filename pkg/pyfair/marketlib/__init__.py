"""Exact fairness audits of hiring markets played as extensive-form games."""

from pyfair.marketlib.audit import run_audit  # noqa: F401
from pyfair.marketlib.scenario import load_scenario  # noqa: F401
from pyfair.marketlib.constants import (  # noqa: F401
    CHECK_IDS,
    SOLUTION_CONCEPTS,
)

__version__ = "1.0.0"
