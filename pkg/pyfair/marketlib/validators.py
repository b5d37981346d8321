"""This module contains helpers to validate things."""

from fractions import Fraction
from typing import NoReturn

from pyfair.marketlib.constants import (
    OFFER_MAX,
    OFFER_MIN,
    REPORT_FORMATS,
    SOLUTION_CONCEPTS,
    STRATEGY_SPACES,
    TIE_BREAKS,
)


def validate_concept(concept: str) -> NoReturn:
    """Validate solution concept.

    Supported concepts:

    - ``nash``
    - ``sce``

    :param concept: Name of solution concept.
    """
    if concept not in SOLUTION_CONCEPTS:
        concepts = ", ".join(SOLUTION_CONCEPTS)

        raise ValueError(
            f"Unsupported solution concept {concept}; "
            f"please choose one of {concepts}"
        )


def validate_strategy_space(space: str) -> NoReturn:
    """Validate candidate strategy space used for enumeration.

    :param space: Name of strategy space.
    """
    if space not in STRATEGY_SPACES:
        spaces = ", ".join(STRATEGY_SPACES)

        raise ValueError(
            f"Unsupported strategy space {space}; "
            f"please choose one of {spaces}"
        )


def validate_tie_break(tie_break: str) -> NoReturn:
    """Validate candidate tie-break action."""
    if tie_break not in TIE_BREAKS:
        choices = ", ".join(TIE_BREAKS)

        raise ValueError(
            f"Unsupported tie-break {tie_break}; "
            f"please choose one of {choices}"
        )


def validate_report_format(format_: str) -> NoReturn:
    r"""Validate report format.

    Supported formats:

    - ``json``
    - ``csv``

    :param format\_: Report format.
    """
    if format_ not in REPORT_FORMATS:
        formats = ", ".join(REPORT_FORMATS)

        raise ValueError(
            f"Unsupported report format {format_}; "
            f"please choose one of {formats}"
        )


def validate_offer_range(value: Fraction, name: str = "value") -> NoReturn:
    """Validate that an offer or outside option lies in the closed offer interval.

    :param value: Rational to check.
    :param name: Name used in the error message.
    """
    if not OFFER_MIN <= value <= OFFER_MAX:
        raise ValueError(
            f"Out of range {name} {value}; "
            f"must lie in [{OFFER_MIN}, {OFFER_MAX}]"
        )
