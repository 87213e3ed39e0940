"""Exact message-passing expressions over embedded graphs.

Expressions are built from the constant 1, node features ``P_i``, rational
scaling, addition, the neighbour sum ``◇`` and activation functions, and are
evaluated in exact rational arithmetic.
"""
from ._kernels import BACKEND
from .activation import CATALOGUE, ID, RELU, SIGN, STEP, TRRELU, Activation, eventually_constant, piecewise
from .evaluator import booleanize, eval, eval_at
from .expr import (
    ONE, Add, And, Apply, Compare, D, Diamond, Expr, Feature, Not, One, Or, Scale,
    activation_depth, classify, diamond_depth, is_affine,
)
from .graph import (
    ColouredGraph, EmbeddedGraph, RbTree, make_nonclosure_trees, make_path_example,
    make_rb_tree, make_star,
)
from .normalform import NormalForm, from_normal_form, negate_boolean, to_normal_form
from .parser import parse, to_text
from .translate import expand_sugar, from_step, to_step

__all__ = [
    "BACKEND", "CATALOGUE", "ID", "RELU", "SIGN", "STEP", "TRRELU", "Activation",
    "eventually_constant", "piecewise", "booleanize", "eval", "eval_at",
    "ONE", "Add", "And", "Apply", "Compare", "D", "Diamond", "Expr", "Feature", "Not", "One",
    "Or", "Scale", "activation_depth", "classify", "diamond_depth", "is_affine",
    "ColouredGraph", "EmbeddedGraph", "RbTree", "make_nonclosure_trees", "make_path_example",
    "make_rb_tree", "make_star", "NormalForm", "from_normal_form", "negate_boolean",
    "to_normal_form", "parse", "to_text", "expand_sugar", "from_step", "to_step",
]
