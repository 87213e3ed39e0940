"""Bottom-up evaluation of MPLang expressions over embedded graphs.

Each distinct AST node is evaluated once into a whole node vector; ``◇`` is a
CSR neighbour sum handled by the aggregation kernel.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

import numpy as np

from .errors import FeatureIndexError, NonExactError
from .expr import Add, Apply, Diamond, Expr, Feature, One, Scale, Sugar, fold
from .graph import EmbeddedGraph
from .ratvec import RatVec
from ._kernels import neighbour_sum_float64


def eval(e: Expr, g: EmbeddedGraph, exact: bool = True) -> Union[RatVec, np.ndarray]:
    """Value of ``e`` at every node; a RatVec, or a float64 array when ``exact=False``."""
    n = g.node_count
    dim = g._dim or 0

    def exact_step(node, kids):
        if isinstance(node, One):
            return RatVec.constant(1, n)
        if isinstance(node, Feature):
            if node.index > dim and n:
                raise FeatureIndexError(f"feature P{node.index} exceeds embedding dimension {dim}")
            return g.feature(node.index) if n else RatVec.constant(0, 0)
        if isinstance(node, Scale):
            if isinstance(node.coeff, float):
                raise NonExactError("float coefficient in exact evaluation; pass exact=False")
            return kids[0].scale(node.coeff)
        if isinstance(node, Add):
            return kids[0] + kids[1]
        if isinstance(node, Diamond):
            return kids[0].neighbour_sum(g.indptr, g.indices, g.max_degree)
        if isinstance(node, Apply):
            return node.act.apply(kids[0])
        if isinstance(node, Sugar):
            raise TypeError("expression contains Boolean sugar; call expand_sugar first")
        raise TypeError(f"not an expression node: {node!r}")

    def float_step(node, kids):
        if isinstance(node, One):
            return np.ones(n)
        if isinstance(node, Feature):
            if node.index > dim and n:
                raise FeatureIndexError(f"feature P{node.index} exceeds embedding dimension {dim}")
            return g.feature_float(node.index) if n else np.zeros(0)
        if isinstance(node, Scale):
            return float(node.coeff) * kids[0]
        if isinstance(node, Add):
            return kids[0] + kids[1]
        if isinstance(node, Diamond):
            return neighbour_sum_float64(g.indptr, g.indices, kids[0])
        if isinstance(node, Apply):
            return node.act.apply_float(kids[0])
        if isinstance(node, Sugar):
            raise TypeError("expression contains Boolean sugar; call expand_sugar first")
        raise TypeError(f"not an expression node: {node!r}")

    return fold(e, exact_step if exact else float_step)


def eval_at(e: Expr, g: EmbeddedGraph, v: int, exact: bool = True):
    if not 0 <= v < g.node_count:
        raise IndexError(f"node {v} not in graph with {g.node_count} nodes")
    values = eval(e, g, exact=exact)
    return values[v] if exact else float(values[v])


def booleanize(e: Expr, g: EmbeddedGraph) -> RatVec:
    """1 where the value is strictly positive, else 0."""
    return RatVec(eval(e, g).positive(), 1, _reduced=True)
