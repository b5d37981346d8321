import json
import os

import pytest


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in list(os.environ):
        if name.startswith("MARKETLIB_"):
            monkeypatch.delenv(name, raising=False)


@pytest.fixture()
def gspec():
    from pyfair.marketlib.market.spec import MarketSpec

    yield MarketSpec.from_step("1/4")


@pytest.fixture()
def gcoarse_spec():
    from pyfair.marketlib.market.spec import MarketSpec

    yield MarketSpec.from_step("3/2")


@pytest.fixture()
def gbilateral(gspec):
    from pyfair.marketlib.market.bilateral import build_bilateral_market

    yield build_bilateral_market(gspec, "x")


@pytest.fixture()
def gtoy_game():
    """Two-stage game: ``a`` quits (L) or passes (R) to ``b`` who picks ``l`` or ``r``."""
    from pyfair.marketlib.game.tree import (
        GameTree,
        InformationSet,
        Node,
    )

    root = InformationSet("root", "a", ("L", "R"))
    reply = InformationSet("reply", "b", ("l", "r"))
    tree = Node(root, {
        "L": Node.leaf({"a": 1, "b": 0}),
        "R": Node(reply, {
            "l": Node.leaf({"a": 2, "b": 1}),
            "r": Node.leaf({"a": 0, "b": 2}),
        }),
    })
    yield GameTree(("a", "b"), tree)


@pytest.fixture()
def gtoy_profile():
    from pyfair.marketlib.game.strategy import (
        PureStrategy,
        StrategyProfile,
    )

    def make(first, second):
        return StrategyProfile({
            "a": PureStrategy("a", {"root": first}),
            "b": PureStrategy("b", {"reply": second}),
        })
    yield make


@pytest.fixture()
def gpopulation():
    from pyfair.marketlib.fairness.population import Population

    yield Population.uniform([
        ("x0", (0,), "a", 1),
        ("x1", (1,), "a", 0),
        ("x2", (2,), "b", 1),
        ("x3", (3,), "b", 0),
    ])


@pytest.fixture()
def gscenario_data():
    yield {
        "version": 1,
        "market": {"grid_step": "3/2"},
        "population": [
            {"id": "x0", "features": ["0"], "sensitive": "a", "label": "1"},
            {"id": "x1", "features": ["1"], "sensitive": "b", "label": "1"},
        ],
        "classifier": {"kind": "constant", "decision": "0"},
        "concept": "sce",
        "checks": [
            {"id": "statistical_parity"},
            {"id": "blatant_unfairness", "candidate": "x0"},
        ],
    }


@pytest.fixture()
def gscenario_file(tmpdir):
    def write(data, name="scenario.json"):
        path = tmpdir.join(name)
        path.write(json.dumps(data))
        return str(path)
    yield write
