"""This module contains various helpers."""

import hashlib
import json
import re
from fractions import Fraction
from typing import Any

from pyfair.marketlib.constants import (
    OFFER_MAX,
    OFFER_MIN,
)

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_rational(value: Any) -> Fraction:
    """Convert given value as exact rational.

    Accepted values are ``int``, :class:`~fractions.Fraction`, and strings
    in ``p/q`` (or plain integer) form. Floats and decimal strings are
    rejected since they cannot be read back exactly.

    .. code-block:: python

        from pyfair.marketlib.utils import to_rational

        to_rational("3/2")  # Fraction(3, 2)
        to_rational("0.5")  # raises ValueError

    :param value: Value to convert.
    :returns: Rational in lowest terms.
    """
    if isinstance(value, bool):
        raise ValueError(f"Unsupported rational {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if not match:
            raise ValueError(f"Unsupported rational {value!r}; expected p/q form")
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise ValueError(f"Unsupported rational {value!r}; zero denominator")
        return Fraction(int(numerator), int(denominator or 1))
    raise ValueError(f"Unsupported rational {value!r}; expected p/q string")


def format_rational(value: Fraction) -> str:
    """Format rational as ``p/q`` (or ``p`` for integers) string."""
    return str(Fraction(value))


def offer_grid(step: Any) -> tuple:
    """Build sorted offer grid from zero to three with given step.

    The highest offer is always part of the grid, even when the step does
    not divide it.

    :param step: Positive rational step.
    :returns: A ``tuple`` of rationals.
    """
    step = to_rational(step)
    if step <= 0:
        raise ValueError(f"Unsupported grid step {step}; must be positive")

    points = []
    value = OFFER_MIN
    while value <= OFFER_MAX:
        points.append(value)
        value += step
    if points[-1] != OFFER_MAX:
        points.append(OFFER_MAX)
    return tuple(points)


def sort_key(value: Any) -> tuple:
    """Get canonical ordering key of heterogeneous values.

    Numbers sort before strings, strings before tuples; tuples compare
    element-wise. Objects exposing ``sort_key`` method are ordered by it.
    """
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return (0, value)
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, tuple):
        return (2, tuple(sort_key(item) for item in value))
    if value is None:
        return (-1,)
    if hasattr(value, "sort_key"):
        return (3, value.sort_key())
    return (4, repr(value))


def jsonable(value: Any) -> Any:
    """Convert rationals (recursively) into JSON-friendly ``p/q`` strings."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return [jsonable(item) for item in sorted(value, key=sort_key)]
    return value


def canonical_json(data: Any) -> str:
    """Dump data as canonical JSON string (sorted keys, fixed separators)."""
    return json.dumps(jsonable(data), sort_keys=True, separators=(",", ":"))


def digest(data: Any) -> str:
    """Get SHA-256 hex digest of canonical JSON representation of data."""
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()


def as_scalar(value: Any) -> Any:
    """Convert JSON scalar into a rational when it looks like one.

    Integers and ``p/q`` strings become :class:`~fractions.Fraction`; any
    other string is returned as is, so categorical values survive.
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL_RE.match(value):
        try:
            return to_rational(value)
        except ValueError:
            return value
    return value
