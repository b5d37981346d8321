from fractions import Fraction

import pytest


@pytest.mark.parametrize("value, expected", [
    ("3/2", Fraction(3, 2)),
    ("6/4", Fraction(3, 2)),
    ("-1", Fraction(-1)),
    (" 1 / 3 ", Fraction(1, 3)),
    (2, Fraction(2)),
    (Fraction(1, 4), Fraction(1, 4)),
])
def test_to_rational(value, expected):
    from pyfair.marketlib.utils import to_rational
    assert to_rational(value) == expected


@pytest.mark.parametrize("value", [
    "0.5",
    "1e3",
    "1/0",
    "half",
    0.5,
    True,
    None,
])
def test_to_rational_invalid(value):
    from pyfair.marketlib.utils import to_rational

    with pytest.raises(ValueError):
        to_rational(value)


@pytest.mark.parametrize("value, expected", [
    (Fraction(3, 2), "3/2"),
    (Fraction(2), "2"),
    (Fraction(-1, 4), "-1/4"),
])
def test_format_rational(value, expected):
    from pyfair.marketlib.utils import format_rational
    assert format_rational(value) == expected


@pytest.mark.parametrize("step, size", [
    ("1/4", 13),
    ("1/2", 7),
    ("3/2", 3),
    ("3", 2),
    ("7/2", 2),
    ("2", 3),
])
def test_offer_grid(step, size):
    from pyfair.marketlib.utils import offer_grid

    grid = offer_grid(step)
    assert len(grid) == size
    assert grid[0] == 0
    assert grid[-1] == 3
    assert list(grid) == sorted(grid)


@pytest.mark.parametrize("step", ["0", "-1/4"])
def test_offer_grid_invalid(step):
    from pyfair.marketlib.utils import offer_grid

    with pytest.raises(ValueError):
        offer_grid(step)


def test_sort_key_orders_heterogeneous_values():
    from pyfair.marketlib.utils import sort_key

    values = ["b", (1, "a"), Fraction(1, 2), None, "a", 0]
    assert sorted(values, key=sort_key) == [None, 0, Fraction(1, 2), "a", "b", (1, "a")]


def test_jsonable():
    from pyfair.marketlib.utils import jsonable

    data = {"a": Fraction(1, 2), Fraction(3): [Fraction(1), ("x", 2)], "s": frozenset({Fraction(2), Fraction(1)})}
    assert jsonable(data) == {"a": "1/2", "3": ["1", ["x", 2]], "s": ["1", "2"]}


def test_canonical_json_and_digest():
    from pyfair.marketlib.utils import canonical_json
    from pyfair.marketlib.utils import digest

    assert canonical_json({"b": Fraction(1, 2), "a": 1}) == '{"a":1,"b":"1/2"}'
    assert digest({"b": 1, "a": 2}) == digest({"a": 2, "b": 1})
    assert digest({"a": 1}) != digest({"a": 2})
    assert len(digest({})) == 64


@pytest.mark.parametrize("value, expected", [
    ("3/2", Fraction(3, 2)),
    (1, Fraction(1)),
    ("g0", "g0"),
    (True, True),
])
def test_as_scalar(value, expected):
    from pyfair.marketlib.utils import as_scalar

    result = as_scalar(value)
    assert result == expected
    assert type(result) is type(expected)
