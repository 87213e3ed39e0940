"""Rewriting between activation regimes on coloured graphs.

``to_step`` replaces every application of an uneven eventually constant
activation by a finite sum of shifted step functions that agrees with it on
the value grid of its argument; ``from_step`` simulates ``step`` with any
uneven eventually constant activation.  Both rely on the fact that a rational
expression on a coloured graph only takes values on a grid ``Z/g``
(see :func:`mplang.expr.grid_denominator`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .activation import STEP, Activation
from .errors import NonExactError, TranslationError
from .expr import (
    ONE, Add, And, Apply, Compare, Diamond, Expr, Feature, Not, One, Or, Scale, Sugar,
    const, fold, grid_denominator, is_rational,
)

_NEG = Fraction(-1)


def _step(x: Expr) -> Expr:
    return Apply(STEP, x)


def _shift(x: Expr, p) -> Expr:
    """``x - p``"""
    return x if p == 0 else Add(x, const(-Fraction(p)))


def _scaled(c, x: Expr) -> Expr:
    return x if c == 1 else Scale(c, x)


def step_prime(x: Expr) -> Expr:
    """``1 - step(-x)``: 1 on x >= 0, 0 on x < 0."""
    return Add(ONE, Scale(_NEG, _step(Scale(_NEG, x))))


# Boolean sugar ------------------------------------------------------------

def _greater(a: Expr, b: Expr) -> Expr:
    return _step(Add(a, Scale(_NEG, b)))


def _not(a: Expr) -> Expr:
    return Add(ONE, Scale(_NEG, _step(a)))


def _or(a: Expr, b: Expr) -> Expr:
    return Add(_step(a), _step(b))


def _and(a: Expr, b: Expr) -> Expr:
    return Add(Add(_step(a), _step(b)), Scale(_NEG, ONE))


def _compare(op: str, a: Expr, b: Expr) -> Expr:
    if op == ">":
        return _greater(a, b)
    if op == "<":
        return _greater(b, a)
    if op == "<=":
        return _not(_greater(a, b))
    if op == ">=":
        return _not(_greater(b, a))
    if op == "=":
        return _not(_or(_greater(a, b), _greater(b, a)))
    if op == "!=":
        return _or(_greater(a, b), _greater(b, a))
    raise ValueError(op)


def expand_sugar(e: Expr) -> Expr:
    """Rewrite ``| & ! > < >= <= = !=`` into step-MPLang."""
    def f(node, kids):
        if isinstance(node, Or):
            return _or(*kids)
        if isinstance(node, And):
            return _and(*kids)
        if isinstance(node, Not):
            return _not(kids[0])
        if isinstance(node, Compare):
            return _compare(node.op, *kids)
        return _rebuild(node, kids)
    return fold(e, f)


def _rebuild(node: Expr, kids: list) -> Expr:
    if isinstance(node, (One, Feature)):
        return node
    if isinstance(node, Scale):
        return node if kids[0] is node.body else Scale(node.coeff, kids[0])
    if isinstance(node, Diamond):
        return node if kids[0] is node.body else Diamond(kids[0])
    if isinstance(node, Apply):
        return node if kids[0] is node.body else Apply(node.act, kids[0])
    if isinstance(node, Add):
        if kids[0] is node.left and kids[1] is node.right:
            return node
        return Add(kids[0], kids[1])
    raise TypeError(f"unexpected node {node!r}")


# gadgets ------------------------------------------------------------------

@dataclass(frozen=True)
class StepGadget:
    """A step-built piece: ``transformed`` t, ``blip`` s or ``reversed`` t'."""

    kind: str
    p1: Fraction
    p2: Fraction
    grid_step: Fraction = Fraction(1)

    def expand(self, x: Expr) -> Expr:
        if self.kind == "transformed":
            return _scaled(self.p2, step_prime(_shift(x, self.p1)))
        if self.kind == "blip":
            lo = StepGadget("transformed", self.p1, self.p2).expand(x)
            hi = StepGadget("transformed", self.p1 + self.grid_step, self.p2).expand(x)
            return Add(lo, Scale(_NEG, hi))
        if self.kind == "reversed":
            return _scaled(self.p2, Add(ONE, Scale(_NEG, _step(_shift(x, self.p1)))))
        raise ValueError(f"unknown gadget kind {self.kind!r}")

    def value(self, x) -> Fraction:
        """Reference value at a scalar input."""
        x = Fraction(x)
        if self.kind == "transformed":
            return self.p2 if x >= self.p1 else Fraction(0)
        if self.kind == "blip":
            return self.p2 if self.p1 <= x < self.p1 + self.grid_step else Fraction(0)
        return self.p2 if x <= self.p1 else Fraction(0)


def _check_eventually_constant(act: Activation, uneven: bool = False) -> None:
    if act.meta is None:
        raise TranslationError(f"activation {act.name!r} has no eventually-constant metadata")
    if uneven and not act.meta.uneven:
        raise TranslationError(f"activation {act.name!r} is even (equal tail values)")


def step_simulation(act: Activation, x: Expr, grid: int) -> Expr:
    """Step-only expression equal to ``act(x)`` whenever ``x`` lies on ``Z/grid``."""
    _check_eventually_constant(act)
    m = act.meta
    lo = math.floor(grid * m.t_minus)
    hi = math.ceil(grid * m.t_plus)
    step_size = Fraction(1, grid)
    gadgets = [StepGadget("reversed", Fraction(lo, grid), m.f_minus, step_size)]
    gadgets += [StepGadget("blip", Fraction(i, grid), act(Fraction(i, grid)), step_size)
                for i in range(lo + 1, hi)]
    gadgets.append(StepGadget("transformed", Fraction(hi, grid), m.f_plus, step_size))
    terms = [g.expand(x) for g in gadgets if g.p2 != 0]
    if not terms:
        return Scale(Fraction(0), ONE)
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def to_step(e: Expr) -> Expr:
    """Numerically equivalent step-only expression (exact on coloured graphs)."""
    if not is_rational(e):
        raise NonExactError("activation translation needs rational coefficients")

    def f(node, kids):
        if isinstance(node, Sugar):
            raise TypeError("internal: sugar survived expansion")
        if isinstance(node, Apply):
            if node.act.kind == "step":
                return node if kids[0] is node.body else _step(kids[0])
            _check_eventually_constant(node.act, uneven=True)
            return step_simulation(node.act, kids[0], grid_denominator(kids[0]))
        return _rebuild(node, kids)
    return fold(expand_sugar(e), f)


def from_step(e: Expr, act: Activation) -> Expr:
    """Replace each ``step(x)`` by ``(act(A x + t-) - f-) / (f+ - f-)`` with ``A = g (t+ - t-)``."""
    _check_eventually_constant(act, uneven=True)
    if not is_rational(e):
        raise NonExactError("activation translation needs rational coefficients")
    e = expand_sugar(e)
    m = act.meta

    def f(node, kids):
        if isinstance(node, Apply):
            if node.act.kind != "step":
                raise TranslationError(f"from_step expects step-only input, found {node.act.name!r}")
            grid = grid_denominator(node.body)
            inner = _scaled(grid * (m.t_plus - m.t_minus), kids[0])
            if m.t_minus != 0:
                inner = Add(inner, const(m.t_minus))
            out = Apply(act, inner)
            if m.f_minus != 0:
                out = Add(out, const(-m.f_minus))
            return _scaled(1 / (m.f_plus - m.f_minus), out)
        return _rebuild(node, kids)
    return fold(e, f)
