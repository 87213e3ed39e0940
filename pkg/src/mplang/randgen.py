"""Seeded random generators for expressions, graphs, formulas and models."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .activation import ID, STEP, Activation
from .expr import ONE, Add, Apply, Diamond, Expr, Feature, Scale
from .gnn import GnnLayer, GnnModel
from .graph import ColouredGraph, EmbeddedGraph
from . import logic as L

_NUMERATORS = (-3, -2, -1, 1, 2, 3)
_DENOMINATORS = (1, 1, 2, 3)


def rational(rng: random.Random, allow_zero: bool = False) -> Fraction:
    num = rng.choice(_NUMERATORS + ((0,) if allow_zero else ()))
    return Fraction(num, rng.choice(_DENOMINATORS))


def random_expr(rng: random.Random, dim: int, depth: int, size: int = 8,
                acts: Sequence[Activation] = (), act_rate: float = 0.3) -> Expr:
    """Random expression of ◇-depth at most ``depth`` with roughly ``size`` nodes.

    Activations are drawn from ``acts``; with an empty ``acts`` the result is affine.
    """
    def leaf():
        if rng.random() < 0.25:
            return ONE
        return Feature(rng.randint(1, dim))

    def go(d, budget):
        if budget <= 1:
            return Diamond(leaf()) if d > 0 and rng.random() < 0.3 else leaf()
        roll = rng.random()
        if acts and roll < act_rate:
            return Apply(rng.choice(acts), go(d, budget - 1))
        roll = rng.random()
        if d > 0 and roll < 0.35:
            return Diamond(go(d - 1, budget - 1))
        if roll < 0.55:
            return Scale(rational(rng), go(d, budget - 1))
        split = rng.randint(1, budget - 1)
        return Add(go(d, split), go(d, budget - split))

    return go(depth, size)


def random_affine(rng: random.Random, dim: int, depth: int, size: int = 8) -> Expr:
    return random_expr(rng, dim, depth, size)


def random_step_expr(rng: random.Random, dim: int, depth: int, size: int = 8) -> Expr:
    return random_expr(rng, dim, depth, size, acts=(STEP,), act_rate=0.35)


def random_coloured_graph(rng: random.Random, colours: Sequence[str], max_nodes: int = 12,
                          min_nodes: int = 1) -> ColouredGraph:
    n = rng.randint(min_nodes, max_nodes)
    p = rng.choice((0.15, 0.3, 0.5))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    node_colours = [rng.choice(colours) for _ in range(n)]
    return ColouredGraph.from_colours(n, edges, node_colours, colours)


def random_embedded_graph(rng: random.Random, dim: int, max_nodes: int = 12) -> EmbeddedGraph:
    n = rng.randint(1, max_nodes)
    p = rng.choice((0.15, 0.3, 0.5))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    rows = [[rational(rng, allow_zero=True) for _ in range(dim)] for _ in range(n)]
    return EmbeddedGraph(n, edges, rows)


def random_formula(rng: random.Random, colours: int, depth: int, size: int = 6,
                   graded: bool = True, presburger: bool = True) -> L.Formula:
    def leaf():
        return L.TOP if rng.random() < 0.15 else L.Colour(rng.randint(1, colours))

    def go(d, budget):
        if budget <= 1:
            return leaf()
        options = ["not", "and", "or"]
        if d > 0:
            options += ["dia", "dia"]
            if graded:
                options += ["geq", "geq"]
            if presburger:
                options += ["sum"]
        kind = rng.choice(options)
        if kind == "not":
            return L.Not(go(d, budget - 1))
        if kind in ("and", "or"):
            split = rng.randint(1, budget - 1)
            cls = L.And if kind == "and" else L.Or
            return cls(go(d, split), go(d, budget - split))
        if kind == "dia":
            return L.Dia(go(d - 1, budget - 1))
        if kind == "geq":
            return L.DiaGeq(rng.randint(1, 3), go(d - 1, budget - 1))
        count = rng.randint(1, 2)
        terms = tuple((rational(rng), go(d - 1, max(1, (budget - 1) // count))) for _ in range(count))
        op = rng.choice(("=", "!=", "<=", ">=", "<", ">"))
        delta = Fraction(rng.randint(-2, 3), rng.choice((1, 2)))
        return L.PresburgerAtom(terms, op, delta)

    return go(depth, size)


def random_model(rng: random.Random, in_dim: int, max_layers: int = 3, max_width: int = 4,
                 acts: Sequence[Activation] = (ID,)) -> GnnModel:
    count = rng.randint(1, max_layers)
    widths = [in_dim] + [rng.randint(1, max_width) for _ in range(count - 1)] + [1]
    layers = []
    for d_in, d_out in zip(widths, widths[1:]):
        def matrix():
            return tuple(tuple(rational(rng, allow_zero=True) if rng.random() < 0.6 else Fraction(0)
                               for _ in range(d_in)) for _ in range(d_out))
        bias = tuple(rational(rng, allow_zero=True) for _ in range(d_out))
        layers.append(GnnLayer(matrix(), matrix(), bias, tuple(rng.choice(acts) for _ in range(d_out))))
    return GnnModel(tuple(layers))


def staircase() -> Activation:
    """Five constant pieces with rational breakpoints -1, -1/3, 1/2, 2."""
    from .activation import piecewise
    breakpoints = [Fraction(-1), Fraction(-1, 3), Fraction(1, 2), Fraction(2)]
    values = [Fraction(-1), Fraction(0), Fraction(1, 3), Fraction(1), Fraction(2)]
    return piecewise("stair5", breakpoints, [(Fraction(0), v) for v in values])
