import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import COLOURS, coloured_graphs, embedded_graphs, exprs
from oracles import walk_count
from mplang.activation import ID, RELU, SIGN, STEP, TRRELU, piecewise
from mplang.errors import DimensionError, GraphFormatError, UnknownActivationError
from mplang.evaluator import eval
from mplang.expr import ONE, Apply, D, Feature, Scale, activation_depth, classify, diamond_depth
from mplang.gnn import (
    GnnLayer, GnnModel, compile, decompile, dumps_model, eval_gnn, load_model, loads_model, save_model,
)
from mplang.graph import EmbeddedGraph, make_star
from mplang.parser import parse
from mplang.randgen import random_embedded_graph, random_model, staircase

F = Fraction
ACTS = (RELU, TRRELU, SIGN, STEP, ID)


def ones_star(a):
    g, c = make_star(a, 0)
    return EmbeddedGraph(g.node_count, g.edges, [[1]] * g.node_count), c


def single(w1, w2, b, act):
    return GnnModel((GnnLayer(((w1,),), ((w2,),), (b,), (act,)),))


def test_sum_layer_on_star():
    g, c = ones_star(2)
    assert eval_gnn(single(1, 1, 0, ID), g)[c] == 3


def test_bias_only_layer():
    g, _ = ones_star(2)
    assert eval_gnn(single(0, 0, 5, ID), g).tolist() == [5, 5, 5]


def test_relu_clips_negative_pre_activation():
    g, c = ones_star(1)
    assert eval_gnn(single(-2, 0, 0, RELU), g)[c] == 0


def test_shape_validation():
    with pytest.raises(DimensionError):
        GnnLayer(((1, 2),), ((1,),), (0,), (ID,))
    with pytest.raises(DimensionError):
        GnnLayer(((1,),), ((1,),), (0, 0), (ID,))
    layer = GnnLayer(((1,), (1,)), ((0,), (0,)), (0, 0), (ID, ID))
    with pytest.raises(DimensionError):
        GnnModel((layer,))
    with pytest.raises(DimensionError):
        GnnModel((GnnLayer(((1,),), ((0,),), (0,), (ID,)), GnnLayer(((1, 1),), ((0, 0),), (0,), (ID,))))


def test_dimension_mismatch():
    g, _ = make_star(1, 1)
    with pytest.raises(DimensionError):
        eval_gnn(single(1, 0, 0, ID), g)


def test_compile_selector():
    m = compile(Feature(1), 1)
    assert len(m.layers) == 1
    layer = m.layers[0]
    assert layer.W1 == ((1,),) and layer.W2 == ((0,),) and layer.bias == (0,) and layer.act == (ID,)
    rng = random.Random(0)
    for _ in range(20):
        g = random_embedded_graph(rng, 1)
        assert eval_gnn(m, g) == eval(Feature(1), g)


def test_compile_relu_round_trip():
    e = parse("relu(P1 + D P2)")
    m = compile(e, 2)
    rng = random.Random(1)
    for _ in range(100):
        g = random_embedded_graph(rng, 2)
        assert eval_gnn(m, g) == eval(e, g)


def test_compile_walks_of_length_two():
    m = compile(D(ONE, 2), 1)
    rng = random.Random(2)
    for _ in range(30):
        g = random_embedded_graph(rng, 1)
        assert eval_gnn(m, g).tolist() == [walk_count(g, v, 2) for v in range(g.node_count)]


@given(exprs(dim=3, depth=3, acts=ACTS, size=14), st.one_of(coloured_graphs(), embedded_graphs()))
def test_compile_preserves_values(e, g):
    m = compile(e, 3)
    assert eval_gnn(m, g) == eval(e, g)


@given(exprs(dim=3, depth=3, acts=ACTS, size=14))
def test_layer_budget(e):
    m = compile(e, 3)
    assert len(m.layers) <= diamond_depth(e) + activation_depth(e) + 1
    assert m.in_dim == 3


@given(exprs(dim=3, depth=3, acts=ACTS, size=14), embedded_graphs())
def test_decompile_of_compile(e, g):
    assert eval(decompile(compile(e, 3)), g) == eval(e, g)


@st.composite
def models(draw, in_dim=3, acts=ACTS):
    return random_model(random.Random(draw(st.integers(0, 10**9))), in_dim, 3, 4, acts)


@given(models(), st.one_of(coloured_graphs(), embedded_graphs()))
def test_decompile_preserves_values(m, g):
    assert eval(decompile(m), g) == eval_gnn(m, g)


def test_decompile_bias_only():
    e = decompile(single(0, 0, 5, ID))
    assert e == Scale(F(5), ONE)


def test_identity_models_decompile_to_affine():
    m = GnnModel((GnnLayer(((1, 1), (0, 1)), ((1, 0), (0, 0)), (0, 1), (ID, ID)),
                  GnnLayer(((1, -1),), ((2, 0),), (0,), (ID,))))
    e = decompile(m)
    assert classify(e) == "affine"
    g = EmbeddedGraph(3, [(0, 1), (1, 2)], [[1, 0], [F(1, 2), 2], [0, -1]])
    assert eval(e, g) == eval_gnn(m, g)


@given(models(in_dim=2, acts=(ID,)))
def test_identity_models_are_affine(m):
    assert classify(decompile(m)) == "affine"


def test_decompile_shares_subterms():
    m = GnnModel((GnnLayer(((1,), (2,)), ((0,), (0,)), (0, 0), (RELU, ID)),
                  GnnLayer(((1, 1),), ((1, 1),), (0,), (ID,))))
    e = decompile(m)
    # Add(Add(Add(X0, X1), D X0), D X1): the Diamond reuses the channel expression object
    x0 = e.left.left.left
    assert isinstance(x0, Apply) and e.left.right.body is x0
    g = EmbeddedGraph(3, [(0, 1), (0, 2)], [[1], [-1], [2]])
    assert eval(e, g) == eval_gnn(m, g)


def test_relu_identity_realises_id():
    rng = random.Random(4)
    g, _ = make_star(0, 0)
    x = ONE
    for _ in range(50):
        q = F(rng.randint(-50, 50), rng.randint(1, 9))
        e = Apply(RELU, Scale(q, x)) - Apply(RELU, Scale(-q, x))
        assert eval(e, g)[0] == q


def test_model_file_round_trip(tmp_path):
    m = compile(parse("relu(D (P1 - 1)) + D trrelu(P2 + 1/2)"), 2)
    text = dumps_model(m)
    assert loads_model(text) == m
    assert dumps_model(loads_model(text)) == text
    save_model(m, tmp_path / "m.json")
    assert load_model(tmp_path / "m.json") == m
    doc = json.loads(text)
    assert set(doc["layers"][0]) == {"W1", "W2", "bias", "act"}


def test_model_file_custom_activation():
    stair = staircase()
    m = single(1, 0, 0, stair)
    with pytest.raises(UnknownActivationError):
        loads_model(dumps_model(m))
    assert loads_model(dumps_model(m), {stair.name: stair}) == m


def test_malformed_model_file():
    with pytest.raises(GraphFormatError):
        loads_model('{"layers": [{"W1": [[1]]}]}')
