import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import COLOURS, coloured_graphs
from oracles import adjacency, ref_logic
from mplang.activation import STEP
from mplang.errors import FeatureIndexError, GraphFormatError, ParseError
from mplang.evaluator import booleanize, eval
from mplang.expr import Apply, activations_used
from mplang.graph import ColouredGraph, EmbeddedGraph, make_path_example
from mplang.logic import (
    TOP, And, Colour, Dia, DiaGeq, Not, Or, PresburgerAtom, eval_logic, is_ml, logic_to_mplang,
    modal_depth, parse_formula, to_text,
)
from mplang.parser import parse
from mplang.randgen import random_formula
from mplang.translate import expand_sugar

P5 = ["red", "blue"]


@st.composite
def formulas(draw, colours=3, depth=3, graded=True, presburger=True):
    rng = random.Random(draw(st.integers(0, 10**9)))
    return random_formula(rng, colours, depth, size=rng.randint(1, 9), graded=graded, presburger=presburger)


def test_diamond_red_at_v1():
    (g, v), _ = make_path_example()
    assert eval_logic(parse_formula("dia(red)", P5), g)[v] == 1


def test_graded_modality_beyond_max_degree():
    (g, _), _ = make_path_example()
    assert eval_logic(DiaGeq(3, TOP), g).tolist() == [0] * 5


def test_top():
    (g, _), _ = make_path_example()
    assert eval_logic(TOP, g).tolist() == [1] * 5


def test_phi2_translation():
    phi = Dia(DiaGeq(3, TOP))
    assert logic_to_mplang(phi) == Apply(STEP, parse("D step(D 1 - 2)"))


def test_phi1_translation():
    phi = parse_formula("dia(!dia(!blue))", P5)
    e1 = parse("D (1 - step(D (1 - blue)))", P5)
    assert logic_to_mplang(phi) == Apply(STEP, e1)


@given(coloured_graphs(colours=("red", "blue")))
def test_phi1_matches_displayed_expression_booleanly(g):
    phi = parse_formula("dia(!dia(!blue))", P5)
    e1 = parse("D (1 - step(D (1 - blue)))", P5)
    assert booleanize(e1, g) == eval_logic(phi, g) == booleanize(logic_to_mplang(phi), g)


@given(formulas(depth=2), coloured_graphs())
def test_graded_one_is_plain_diamond(phi, g):
    assert booleanize(logic_to_mplang(DiaGeq(1, phi)), g) == booleanize(logic_to_mplang(Dia(phi)), g)


@given(formulas(), coloured_graphs(max_nodes=10))
def test_model_checker_matches_reference(phi, g):
    adj = adjacency(g)
    assert eval_logic(phi, g).tolist() == [int(ref_logic(phi, g, v, adj)) for v in range(g.node_count)]


@given(formulas(), coloured_graphs(max_nodes=10))
def test_translation_is_sound(phi, g):
    e = logic_to_mplang(phi)
    assert all(a.name == "step" for a in activations_used(e))
    values = eval(e, g)
    assert set(values.tolist()) <= {0, 1}
    assert booleanize(e, g) == eval_logic(phi, g)


def test_grandchildren_query():
    colours = ("green", "blue", "white")
    q = expand_sugar(parse("D D green = D D blue", list(colours)))
    # root 0 - middle 1 - two leaves; the leaf colours decide the grandchild counts
    two_green = ColouredGraph.from_colours(4, [(0, 1), (1, 2), (1, 3)], ["white", "white", "green", "green"], colours)
    balanced = ColouredGraph.from_colours(4, [(0, 1), (1, 2), (1, 3)], ["white", "white", "green", "blue"], colours)
    a, b = eval(q, two_green), eval(q, balanced)
    assert set(a.tolist()) <= {0, 1} and set(b.tolist()) <= {0, 1}
    assert a[0] == 0 and b[0] == 1


def test_ml_fragment():
    assert is_ml(parse_formula("dia(red & !dia(blue)) | top", P5))
    assert not is_ml(parse_formula("dia>=2(red)", P5))
    assert not is_ml(parse_formula("sum(1*red) > 0", P5))


@given(formulas(graded=False, presburger=False))
def test_generated_ml_formulas_are_ml(phi):
    assert is_ml(phi)


def test_modal_depth():
    assert modal_depth(parse_formula("dia(dia>=2(red)) & blue", P5)) == 2
    assert modal_depth(TOP) == 0


def test_presburger_semantics():
    # centre of a star with two red and one blue leaf: 2 - 3/2 * 1 = 1/2
    g = ColouredGraph.from_colours(4, [(0, 1), (0, 2), (0, 3)], ["blue", "red", "red", "blue"], P5)
    phi = parse_formula("sum(1*red, -3/2*blue) = 1/2", P5)
    assert eval_logic(phi, g)[0] == 1
    assert eval_logic(parse_formula("sum(red, -3/2 blue) > 1/2", P5), g)[0] == 0


@given(formulas())
def test_surface_syntax_round_trip(phi):
    names = list(COLOURS)
    assert parse_formula(to_text(phi, names), names) == phi
    assert parse_formula(to_text(phi)) == phi


@pytest.mark.parametrize("text", ["dia(", "dia>=0(red)", "sum(red) ~ 1", "purple", "sum(0.5*red) > 1", "red red"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_formula(text, P5)


def test_colour_out_of_range():
    (g, _), _ = make_path_example()
    with pytest.raises(FeatureIndexError):
        eval_logic(Colour(3), g)


def test_requires_coloured_graph():
    g = EmbeddedGraph(2, [(0, 1)], [[Fraction(1, 2)], [1]])
    with pytest.raises(GraphFormatError):
        eval_logic(TOP, g)
