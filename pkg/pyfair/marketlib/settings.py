"""This module contains process-wide settings read from environment variables."""

import logging
import os
from fractions import Fraction
from typing import NamedTuple

from pyfair.marketlib.utils import to_rational
from pyfair.marketlib.validators import (
    validate_concept,
    validate_report_format,
    validate_strategy_space,
    validate_tie_break,
)

logger = logging.getLogger(__name__)


class Settings(NamedTuple):
    """Snapshot of settings."""

    grid_step: Fraction
    budget: int
    search_budget: int
    concept: str
    strategy_space: str
    tie_break: str
    report_format: str


def _get_int(name: str, default: int) -> int:
    try:
        value = int(os.environ.get(name, default))
    except ValueError:
        logger.warning(f"Invalid {name} value; using default {default}")
        value = default
    return max(1, value)


def _get_choice(name: str, default: str, validator) -> str:
    value = os.environ.get(name, default)
    try:
        validator(value)
    except ValueError as exc:
        logger.warning(f"{exc}; using default {default}")
        value = default
    return value


def get_grid_step() -> Fraction:
    """Get offer grid step.

    Default step is ``1/4``. To change the value, pass
    `MARKETLIB_GRID_STEP` environment variable in ``p/q`` form.

    :returns: Positive rational step.
    """
    default = Fraction(1, 4)
    try:
        step = to_rational(os.environ.get("MARKETLIB_GRID_STEP", default))
    except ValueError:
        step = default
    if step <= 0:
        step = default
    return step


def get_budget() -> int:
    """Get maximum number of pure profiles visited by equilibrium enumeration.

    Default budget is 250000 profiles. To change the value, pass
    `MARKETLIB_BUDGET` environment variable.

    .. code-block:: python

        import os

        os.environ["MARKETLIB_BUDGET"] = "1000"

    :returns: Enumeration budget.
    """
    return _get_int("MARKETLIB_BUDGET", 250000)


def get_search_budget() -> int:
    """Get maximum number of belief assignments tried by one SCE witness search.

    Default is 200000. To change the value, pass `MARKETLIB_SEARCH_BUDGET`
    environment variable.
    """
    return _get_int("MARKETLIB_SEARCH_BUDGET", 200000)


def get_concept() -> str:
    """Get default solution concept from `MARKETLIB_CONCEPT` (``sce`` by default)."""
    return _get_choice("MARKETLIB_CONCEPT", "sce", validate_concept)


def get_strategy_space() -> str:
    """Get candidate strategy space from `MARKETLIB_STRATEGY_SPACE` (``threshold`` by default)."""
    return _get_choice("MARKETLIB_STRATEGY_SPACE", "threshold", validate_strategy_space)


def get_tie_break() -> str:
    """Get candidate action when indifferent from `MARKETLIB_TIE_BREAK` (``accept`` by default)."""
    return _get_choice("MARKETLIB_TIE_BREAK", "accept", validate_tie_break)


def get_report_format() -> str:
    """Get report format from `MARKETLIB_REPORT_FORMAT` (``json`` by default)."""
    return _get_choice("MARKETLIB_REPORT_FORMAT", "json", validate_report_format)


def get_settings() -> Settings:
    """Create snapshot of all settings.

    :returns: An instance of :class:`~pyfair.marketlib.settings.Settings`.
    """
    return Settings(
        grid_step=get_grid_step(),
        budget=get_budget(),
        search_budget=get_search_budget(),
        concept=get_concept(),
        strategy_space=get_strategy_space(),
        tie_break=get_tie_break(),
        report_format=get_report_format(),
    )
