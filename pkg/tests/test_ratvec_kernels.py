import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import edge_lists
from mplang import _kernels
from mplang._kernels import _numpy
from mplang.graph import EmbeddedGraph
from mplang.ratvec import RatVec
from mplang.scalar import as_scalar, format_scalar, parse_rational

fracs = st.builds(Fraction, st.integers(-10**6, 10**6), st.integers(1, 50))
vectors = st.lists(fracs, min_size=0, max_size=10)


@given(vectors)
def test_values_round_trip(xs):
    v = RatVec.from_values(xs)
    assert v.tolist() == xs
    assert v.den > 0
    assert math_gcd_reduced(v)


def math_gcd_reduced(v):
    import math
    g = v.den
    for x in v.num:
        g = math.gcd(g, int(x))
    return g == 1 or not len(v)


@given(st.integers(0, 8).flatmap(lambda n: st.tuples(st.lists(fracs, min_size=n, max_size=n),
                                                     st.lists(fracs, min_size=n, max_size=n))), fracs)
def test_arithmetic_matches_fractions(pair, c):
    xs, ys = pair
    a, b = RatVec.from_values(xs), RatVec.from_values(ys)
    assert (a + b).tolist() == [x + y for x, y in zip(xs, ys)]
    assert (a - b).tolist() == [x - y for x, y in zip(xs, ys)]
    assert a.scale(c).tolist() == [c * x for x in xs]
    assert a.add_scalar(c).tolist() == [x + c for x in xs]
    assert list(a.sign_against(c)) == [(x > c) - (x < c) for x in xs]


def test_promotes_to_big_integers_without_overflow():
    big = Fraction(3**40, 7)
    v = RatVec.from_values([big, Fraction(-1, 3)])
    w = v.scale(Fraction(5**30, 11)) + v
    assert w.tolist() == [big * Fraction(5**30, 11) + big, Fraction(-1, 3) * Fraction(5**30, 11) - Fraction(1, 3)]
    assert w.num.dtype == object


def test_demotes_back_to_int64_when_small():
    v = RatVec.from_values([Fraction(2**70), Fraction(1)]).scale(Fraction(1, 2**70))
    assert v.tolist() == [1, Fraction(1, 2**70)]
    u = RatVec.from_values([Fraction(2**70)]).scale(Fraction(1, 2**69))
    assert u.tolist() == [2] and u.num.dtype == np.int64


def test_equality_with_lists():
    assert RatVec.from_values([1, Fraction(1, 2)]) == [1, Fraction(1, 2)]
    assert RatVec.from_values([1]) != [2]


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 9))
    return EmbeddedGraph(n, draw(edge_lists(n)), [[0]] * n)


@given(graphs(), st.data())
def test_backends_agree(g, data):
    xs = data.draw(st.lists(st.integers(-1000, 1000), min_size=g.node_count, max_size=g.node_count))
    x = np.array(xs, dtype=np.int64)
    expected = [sum(xs[u] for u in g.neighbours(v)) for v in range(g.node_count)]
    assert list(_numpy.neighbour_sum_int64(g.indptr, g.indices, x)) == expected
    assert list(_kernels.neighbour_sum_int64(g.indptr, g.indices, x)) == expected
    assert list(_kernels.neighbour_sum_object(g.indptr, g.indices, x.astype(object))) == expected
    xf = x.astype(np.float64) / 3
    assert np.allclose(_kernels.neighbour_sum_float64(g.indptr, g.indices, xf),
                       _numpy.neighbour_sum_float64(g.indptr, g.indices, xf))


def test_compiled_backend_present():
    assert _kernels.BACKEND == "cython"


def test_pure_python_backend_selected_by_environment():
    env = dict(os.environ, MPLANG_PURE_PYTHON="1")
    code = ("from mplang import _kernels, make_star, parse, eval\n"
            "g, c = make_star(3, 1)\n"
            "print(_kernels.BACKEND, eval(parse('D D 1'), g)[c])")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "4"]


def test_scalar_helpers():
    assert as_scalar("3/6") == Fraction(1, 2)
    assert parse_rational("-7") == -7
    assert format_scalar(Fraction(-3, 4)) == "-3/4"
    assert format_scalar(Fraction(2, 3), as_float=True) == "0.666666666667"
    with pytest.raises(TypeError):
        as_scalar(0.5)
    with pytest.raises(ValueError):
        parse_rational("1/0")
