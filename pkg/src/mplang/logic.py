"""Modal formulas (ML, graded ML, local Presburger atoms) over coloured graphs.

Formulas are checked directly on graphs and translated into 0/1-valued
step-MPLang expressions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from ._kernels import neighbour_sum_int64
from .errors import FeatureIndexError, GraphFormatError, NonExactError, ParseError
from .expr import COMPARISONS, ONE, Add, Compare, Diamond, Expr, Feature, Scale, const
from .graph import EmbeddedGraph
from .parser import TokenStream
from .ratvec import RatVec
from .scalar import as_scalar, format_scalar
from .translate import _step, expand_sugar

_NEG = Fraction(-1)


class Formula:
    """Base class of modal formulas."""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Colour(Formula):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("colour indices start at 1")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Dia(Formula):
    body: Formula


@dataclass(frozen=True)
class DiaGeq(Formula):
    count: int
    body: Formula

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("graded modality count must be at least 1")


@dataclass(frozen=True)
class PresburgerAtom(Formula):
    """``Σ λ_i · #{neighbours satisfying φ_i}  op  δ``."""

    terms: tuple
    op: str
    delta: Fraction

    def __post_init__(self):
        terms = tuple((as_scalar(lam), phi) for lam, phi in self.terms)
        if not terms:
            raise ValueError("Presburger atom needs at least one term")
        if self.op not in COMPARISONS:
            raise ValueError(f"unknown comparison {self.op!r}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "delta", as_scalar(self.delta))


TOP = Top()


def children(phi: Formula) -> tuple:
    if isinstance(phi, (Top, Colour)):
        return ()
    if isinstance(phi, (Not, Dia, DiaGeq)):
        return (phi.body,)
    if isinstance(phi, (And, Or)):
        return (phi.left, phi.right)
    if isinstance(phi, PresburgerAtom):
        return tuple(p for _, p in phi.terms)
    raise TypeError(f"not a formula: {phi!r}")


def _fold(phi: Formula, fn):
    memo: dict[int, object] = {}
    stack = [(phi, False)]
    while stack:
        node, ready = stack.pop()
        if id(node) in memo:
            continue
        kids = children(node)
        if ready:
            memo[id(node)] = fn(node, [memo[id(k)] for k in kids])
        else:
            stack.append((node, True))
            stack.extend((k, False) for k in kids if id(k) not in memo)
    return memo[id(phi)]


def modal_depth(phi: Formula) -> int:
    def f(node, kids):
        inner = max(kids, default=0)
        return inner + 1 if isinstance(node, (Dia, DiaGeq, PresburgerAtom)) else inner
    return _fold(phi, f)


def is_ml(phi: Formula) -> bool:
    """True when no graded modality or Presburger atom occurs."""
    return _fold(phi, lambda node, kids: all(kids) and not isinstance(node, (DiaGeq, PresburgerAtom)))


def max_colour(phi: Formula) -> int:
    return _fold(phi, lambda node, kids: max(kids + [node.index if isinstance(node, Colour) else 0]))


# model checking ------------------------------------------------------------

def eval_logic(phi: Formula, g: EmbeddedGraph) -> RatVec:
    """Truth values (0/1) of ``phi`` at every node of the coloured graph ``g``."""
    n = g.node_count
    if n and not g.is_one_hot():
        raise GraphFormatError("formulas are evaluated on coloured (one-hot) graphs")
    k = g.dim if n else 0

    def count(x: np.ndarray) -> np.ndarray:
        return neighbour_sum_int64(g.indptr, g.indices, x.astype(np.int64))

    def f(node, kids):
        if isinstance(node, Top):
            return np.ones(n, dtype=bool)
        if isinstance(node, Colour):
            if n and node.index > k:
                raise FeatureIndexError(f"colour {node.index} exceeds the {k} colours of the graph")
            return g.feature(node.index).positive() if n else np.zeros(0, dtype=bool)
        if isinstance(node, Not):
            return ~kids[0]
        if isinstance(node, And):
            return kids[0] & kids[1]
        if isinstance(node, Or):
            return kids[0] | kids[1]
        if isinstance(node, Dia):
            return count(kids[0]) >= 1
        if isinstance(node, DiaGeq):
            return count(kids[0]) >= node.count
        if isinstance(node, PresburgerAtom):
            total = RatVec.constant(0, n)
            for (lam, _), sat in zip(node.terms, kids):
                total = total + RatVec(count(sat), 1).scale(lam)
            s = total.sign_against(node.delta)
            return {">": s > 0, "<": s < 0, ">=": s >= 0, "<=": s <= 0, "=": s == 0, "!=": s != 0}[node.op]
        raise TypeError(f"not a formula: {node!r}")

    return RatVec(_fold(phi, f).astype(np.int64), 1, _reduced=True)


# translation -----------------------------------------------------------------

def logic_to_mplang(phi: Formula) -> Expr:
    """A step-MPLang expression taking value 1 where ``phi`` holds and 0 elsewhere."""
    def f(node, kids):
        if isinstance(node, Top):
            return ONE
        if isinstance(node, Colour):
            return Feature(node.index)
        if isinstance(node, Not):
            return Add(ONE, Scale(_NEG, kids[0]))
        if isinstance(node, And):
            return _step(Add(Add(kids[0], kids[1]), Scale(_NEG, ONE)))
        if isinstance(node, Or):
            return _step(Add(kids[0], kids[1]))
        if isinstance(node, Dia):
            return _step(Diamond(kids[0]))
        if isinstance(node, DiaGeq):
            body = Diamond(kids[0])
            if node.count > 1:
                body = Add(body, const(-(node.count - 1)))
            return _step(body)
        if isinstance(node, PresburgerAtom):
            total = None
            for (lam, _), t in zip(node.terms, kids):
                term = Diamond(t) if lam == 1 else Scale(lam, Diamond(t))
                total = term if total is None else Add(total, term)
            return expand_sugar(Compare(node.op, total, const(node.delta)))
        raise TypeError(f"not a formula: {node!r}")
    return _fold(phi, f)


# surface syntax ----------------------------------------------------------------

class _LogicParser:
    """Grammar::

        or    := and ('|' and)*
        and   := unary ('&' unary)*
        unary := '!' unary | atom
        atom  := 'top' | colour | 'P' int | '(' or ')'
               | 'dia' ('>=' int)? '(' or ')'
               | 'sum' '(' term (',' term)* ')' cmp rational
        term  := ('-'? rational '*'? | '-')? unary
    """

    def __init__(self, text: str, colours):
        self.ts = TokenStream(text)
        if colours is None:
            self.colours = {}
        elif isinstance(colours, Mapping):
            self.colours = dict(colours)
        else:
            self.colours = {name: i + 1 for i, name in enumerate(colours)}

    def parse(self) -> Formula:
        phi = self.disj()
        if self.ts.peek.kind != "eof":
            self.ts.error(f"unexpected {self.ts.peek.text!r}")
        return phi

    def disj(self):
        phi = self.conj()
        while self.ts.at("|"):
            self.ts.next()
            phi = Or(phi, self.conj())
        return phi

    def conj(self):
        phi = self.unary()
        while self.ts.at("&"):
            self.ts.next()
            phi = And(phi, self.unary())
        return phi

    def unary(self):
        if self.ts.at("!"):
            self.ts.next()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        ts = self.ts
        tok = ts.peek
        if ts.at("("):
            ts.next()
            phi = self.disj()
            ts.expect(")")
            return phi
        if tok.kind != "ident":
            ts.error(f"expected a formula, found {tok.text or 'end of input'!r}")
        ts.next()
        if tok.text == "top":
            return TOP
        if tok.text == "dia":
            count = None
            if ts.at(">="):
                ts.next()
                num = ts.next()
                if num.kind != "int" or int(num.text) < 1:
                    ts.error("graded modality needs a positive integer count", num)
                count = int(num.text)
            ts.expect("(")
            body = self.disj()
            ts.expect(")")
            return Dia(body) if count is None else DiaGeq(count, body)
        if tok.text == "sum":
            ts.expect("(")
            terms = [self.term()]
            while ts.at(","):
                ts.next()
                terms.append(self.term())
            ts.expect(")")
            op = ts.next()
            if op.text not in COMPARISONS:
                ts.error(f"expected a comparison, found {op.text or 'end of input'!r}", op)
            return PresburgerAtom(tuple(terms), op.text, self.exact(ts.signed_rational()))
        if tok.text in self.colours:
            return Colour(self.colours[tok.text])
        if tok.text.startswith("P") and tok.text[1:].isdigit() and int(tok.text[1:]) >= 1:
            return Colour(int(tok.text[1:]))
        ts.error(f"unknown colour {tok.text!r}", tok)

    def term(self):
        ts = self.ts
        lam = Fraction(1)
        if ts.at("-"):
            ts.next()
            lam = _NEG
        if ts.peek.kind in ("int", "float"):
            lam = lam * self.exact(ts.rational())
            if ts.at("*"):
                ts.next()
        return (lam, self.unary())

    def exact(self, q):
        if isinstance(q, float):
            self.ts.error("Presburger coefficients must be exact rationals")
        return q


def parse_formula(text: str, colours=None) -> Formula:
    """Parse the surface syntax; ``colours`` lists colour names in feature order."""
    return _LogicParser(text, colours).parse()


def to_text(phi: Formula, colours: Optional[Sequence[str]] = None) -> str:
    names = list(colours) if colours else None

    def go(node, prec):
        # prec: 0 = or, 1 = and, 2 = unary
        if isinstance(node, Top):
            return "top"
        if isinstance(node, Colour):
            if names and node.index <= len(names):
                return names[node.index - 1]
            return f"P{node.index}"
        if isinstance(node, Not):
            return "!" + go(node.body, 2)
        if isinstance(node, Dia):
            return f"dia({go(node.body, 0)})"
        if isinstance(node, DiaGeq):
            return f"dia>={node.count}({go(node.body, 0)})"
        if isinstance(node, PresburgerAtom):
            parts = []
            for lam, sub in node.terms:
                parts.append(f"{format_scalar(lam)}*{go(sub, 2)}")
            return f"sum({', '.join(parts)}) {node.op} {format_scalar(node.delta)}"
        if isinstance(node, And):
            s = f"{go(node.left, 1)} & {go(node.right, 2)}"
            return s if prec <= 1 else f"({s})"
        if isinstance(node, Or):
            s = f"{go(node.left, 0)} | {go(node.right, 1)}"
            return s if prec == 0 else f"({s})"
        raise TypeError(f"not a formula: {node!r}")

    return go(phi, 0)
