from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mplang.activation import ID, RELU, SIGN, STEP, TRRELU
from mplang.expr import ONE, Add, Apply, Diamond, Feature, Scale
from mplang.graph import ColouredGraph, EmbeddedGraph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

COLOURS = ("red", "blue", "white")

rationals = st.builds(Fraction, st.integers(-4, 4).filter(bool), st.sampled_from([1, 1, 2, 3, 4]))
rationals0 = st.builds(Fraction, st.integers(-4, 4), st.sampled_from([1, 2, 3]))


@st.composite
def exprs(draw, dim=3, depth=3, acts=(), size=10):
    def go(d, budget):
        if budget <= 1:
            leaf = draw(st.one_of(st.just(ONE), st.builds(Feature, st.integers(1, dim))))
            return Diamond(leaf) if d > 0 and draw(st.booleans()) else leaf
        options = ["scale", "add"] + (["dia"] if d > 0 else []) + (["act"] if acts else [])
        kind = draw(st.sampled_from(options))
        if kind == "scale":
            return Scale(draw(rationals), go(d, budget - 1))
        if kind == "dia":
            return Diamond(go(d - 1, budget - 1))
        if kind == "act":
            return Apply(draw(st.sampled_from(acts)), go(d, budget - 1))
        split = draw(st.integers(1, budget - 1))
        return Add(go(d, split), go(d, budget - split))
    return go(depth, draw(st.integers(1, size)))


@st.composite
def edge_lists(draw, n):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return [p for p in pairs if draw(st.booleans())] if pairs else []


@st.composite
def coloured_graphs(draw, colours=COLOURS, max_nodes=8, min_nodes=1):
    n = draw(st.integers(min_nodes, max_nodes))
    edges = draw(edge_lists(n))
    node_colours = draw(st.lists(st.sampled_from(colours), min_size=n, max_size=n))
    return ColouredGraph.from_colours(n, edges, node_colours, colours)


@st.composite
def embedded_graphs(draw, dim=3, max_nodes=8):
    n = draw(st.integers(1, max_nodes))
    edges = draw(edge_lists(n))
    rows = draw(st.lists(st.lists(rationals0, min_size=dim, max_size=dim), min_size=n, max_size=n))
    return EmbeddedGraph(n, edges, rows)


@pytest.fixture
def rgb():
    return list(COLOURS)


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
