"""The MPLang abstract syntax tree and structural analyses.

Nodes are immutable.  Subtrees may be shared (translations produce DAGs), so
every traversal here memoises on node identity and is linear in the number of
distinct nodes rather than in the size of the unfolded tree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .activation import Activation
from .scalar import as_scalar


class Expr:
    """Base class; operators build ASTs so tests can write ``D(red) - D(blue)``."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, _coerce(other))

    def __radd__(self, other):
        return Add(_coerce(other), self)

    def __sub__(self, other):
        return Add(self, Scale(Fraction(-1), _coerce(other)))

    def __rsub__(self, other):
        return Add(_coerce(other), Scale(Fraction(-1), self))

    def __neg__(self):
        return Scale(Fraction(-1), self)

    def __rmul__(self, coeff):
        return Scale(coeff, self)

    def __mul__(self, coeff):
        return Scale(coeff, self)

    def __str__(self):
        from .parser import to_text
        return to_text(self)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return const(x)


@dataclass(frozen=True, eq=True)
class One(Expr):
    pass


@dataclass(frozen=True, eq=True)
class Feature(Expr):
    index: int  # 1-based channel

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"feature index must be a positive integer, got {self.index!r}")


@dataclass(frozen=True, eq=True)
class Scale(Expr):
    coeff: Union[Fraction, float]
    body: Expr

    def __post_init__(self):
        if not isinstance(self.coeff, float):
            object.__setattr__(self, "coeff", as_scalar(self.coeff))


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Diamond(Expr):
    body: Expr


@dataclass(frozen=True, eq=True)
class Apply(Expr):
    act: Activation
    body: Expr


# Boolean sugar; removed by ``translate.expand_sugar`` before evaluation.
class Sugar(Expr):
    __slots__ = ()


@dataclass(frozen=True, eq=True)
class Or(Sugar):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class And(Sugar):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Not(Sugar):
    body: Expr


COMPARISONS = (">", "<", ">=", "<=", "=", "!=")


@dataclass(frozen=True, eq=True)
class Compare(Sugar):
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in COMPARISONS:
            raise ValueError(f"unknown comparison {self.op!r}")


ONE = One()


def const(c) -> Expr:
    c = as_scalar(c) if not isinstance(c, float) else c
    return ONE if c == 1 and not isinstance(c, float) else Scale(c, ONE)


def D(e: Expr, times: int = 1) -> Expr:
    for _ in range(times):
        e = Diamond(e)
    return e


def children(e: Expr) -> tuple:
    if isinstance(e, (One, Feature)):
        return ()
    if isinstance(e, (Scale, Diamond, Apply, Not)):
        return (e.body,)
    return (e.left, e.right)


def fold(e: Expr, fn: Callable) -> object:
    """Post-order fold: ``fn(node, child_results)`` computed once per distinct node."""
    memo: dict[int, object] = {}
    stack = [(e, False)]
    while stack:
        node, ready = stack.pop()
        key = id(node)
        if key in memo:
            continue
        kids = children(node)
        if ready or not kids:
            memo[key] = fn(node, [memo[id(k)] for k in kids])
        else:
            stack.append((node, True))
            stack.extend((k, False) for k in kids if id(k) not in memo)
    return memo[id(e)]


def diamond_depth(e: Expr) -> int:
    def f(node, kids):
        if isinstance(node, Diamond):
            return kids[0] + 1
        return max(kids, default=0)
    return fold(e, f)


def activation_depth(e: Expr) -> int:
    """Maximum number of nested ``Apply`` nodes on a root-to-leaf path."""
    def f(node, kids):
        base = max(kids, default=0)
        return base + 1 if isinstance(node, Apply) else base
    return fold(e, f)


def coefficients(e: Expr) -> list:
    out = []

    def f(node, kids):
        if isinstance(node, Scale):
            out.append(node.coeff)
    fold(e, f)
    return out


def is_rational(e: Expr) -> bool:
    return all(not isinstance(c, float) for c in coefficients(e))


def lcd(e: Expr) -> int:
    """Least common multiple of all coefficient denominators (1 without coefficients)."""
    from .errors import NonExactError
    out = 1
    for c in coefficients(e):
        if isinstance(c, float):
            raise NonExactError("lcd is only defined for rational expressions")
        out = math.lcm(out, c.denominator)
    return out


def grid_denominator(e: Expr) -> int:
    """A ``g`` such that on coloured graphs every value of ``e`` is a multiple of ``1/g``.

    Unlike :func:`lcd` this accounts for nested scalings (``1/2 (1/2 1)``
    takes the value ``1/4`` although its lcd is 2).  Requires an expression
    whose activations are all ``step``; sugar must be expanded first.
    """
    from .errors import NonExactError

    def f(node, kids):
        if isinstance(node, (One, Feature)):
            return 1
        if isinstance(node, Scale):
            if isinstance(node.coeff, float):
                raise NonExactError("grid denominators need rational coefficients")
            q = node.coeff
            if q == 0:
                return 1
            return kids[0] * q.denominator // math.gcd(q.numerator, kids[0])
        if isinstance(node, Add):
            return math.lcm(*kids)
        if isinstance(node, Diamond):
            return kids[0]
        if isinstance(node, Apply):
            if node.act.kind == "step" or node.act.kind == "sign":
                return 1
            if node.act.kind == "id":
                return kids[0]
            raise ValueError(f"no value grid known for activation {node.act.name!r}")
        raise TypeError(f"cannot compute a value grid for {type(node).__name__}")
    return fold(e, f)


def activations_used(e: Expr) -> list[Activation]:
    """Distinct activations in pre-order of first occurrence."""
    seen: list[Activation] = []
    visited: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if id(node) in visited:
            continue
        visited.add(id(node))
        if isinstance(node, Apply) and node.act not in seen:
            seen.append(node.act)
        stack.extend(reversed(children(node)))
    return seen


def classify(e: Expr):
    """``"affine"`` when no activation occurs, else ``("uses-activations", [names])``."""
    acts = activations_used(e)
    if not acts:
        return "affine"
    return ("uses-activations", [a.name for a in acts])


def is_affine(e: Expr) -> bool:
    return classify(e) == "affine"


def max_feature_index(e: Expr) -> int:
    def f(node, kids):
        here = node.index if isinstance(node, Feature) else 0
        return max([here, *kids])
    return fold(e, f)


def node_count(e: Expr) -> int:
    """Number of distinct nodes (DAG size)."""
    count = [0]

    def f(node, kids):
        count[0] += 1
    fold(e, f)
    return count[0]


def contains_sugar(e: Expr) -> bool:
    return fold(e, lambda node, kids: isinstance(node, Sugar) or any(kids))
