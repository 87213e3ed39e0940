"""Walk-count normal form of affine expressions and rational Boolean negation.

Every affine expression of ◇-depth n over d features equals

    sum_{i=0..n} ( c[i] ◇^i 1 + sum_j cf[i][j] ◇^i P_j )

on all d-embedded graphs.  The coefficients follow the structural recursion
directly: atoms set one slot, scaling multiplies, sums add with padding, and
◇ shifts every level up by one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import FeatureIndexError, NonExactError, NotAffineError
from .expr import ONE, Add, Apply, D, Diamond, Expr, Feature, One, Scale, Sugar, fold, max_feature_index


@dataclass(frozen=True)
class NormalForm:
    depth: int
    dim: int
    c: tuple          # c[i]: coefficient of ◇^i 1
    cf: tuple         # cf[i][j-1]: coefficient of ◇^i P_j

    def __post_init__(self):
        if len(self.c) != self.depth + 1 or len(self.cf) != self.depth + 1:
            raise ValueError("coefficient arrays must have depth + 1 levels")
        if any(len(row) != self.dim for row in self.cf):
            raise ValueError("feature coefficient rows must have dim entries")

    @classmethod
    def zero(cls, depth: int, dim: int) -> "NormalForm":
        z = Fraction(0)
        return cls(depth, dim, (z,) * (depth + 1), ((z,) * dim,) * (depth + 1))

    def padded(self, depth: int) -> "NormalForm":
        if depth < self.depth:
            raise ValueError("cannot pad to a smaller depth")
        extra = depth - self.depth
        z = Fraction(0)
        return NormalForm(depth, self.dim, self.c + (z,) * extra, self.cf + ((z,) * self.dim,) * extra)

    def scaled(self, a) -> "NormalForm":
        return NormalForm(self.depth, self.dim, tuple(a * x for x in self.c),
                          tuple(tuple(a * x for x in row) for row in self.cf))

    def __add__(self, other: "NormalForm") -> "NormalForm":
        n = max(self.depth, other.depth)
        p, q = self.padded(n), other.padded(n)
        return NormalForm(n, self.dim, tuple(x + y for x, y in zip(p.c, q.c)),
                          tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(p.cf, q.cf)))

    def shifted(self) -> "NormalForm":
        z = Fraction(0)
        return NormalForm(self.depth + 1, self.dim, (z,) + self.c, ((z,) * self.dim,) + self.cf)

    def slots(self) -> int:
        return (self.depth + 1) * (self.dim + 1)

    def coefficients(self):
        for i in range(self.depth + 1):
            yield self.c[i]
            yield from self.cf[i]

    def lcd(self) -> int:
        out = 1
        for x in self.coefficients():
            if isinstance(x, float):
                raise NonExactError("normal form has float coefficients")
            out = math.lcm(out, Fraction(x).denominator)
        return out


def to_normal_form(e: Expr, dim: int | None = None, depth: int | None = None) -> NormalForm:
    """Normal form of an affine expression; ``depth`` pads to at least that many levels."""
    if dim is None:
        dim = max(max_feature_index(e), 1)

    def step(node, kids):
        if isinstance(node, One):
            nf = NormalForm.zero(0, dim)
            return NormalForm(0, dim, (Fraction(1),), nf.cf)
        if isinstance(node, Feature):
            if node.index > dim:
                raise FeatureIndexError(f"feature P{node.index} exceeds dimension {dim}")
            row = [Fraction(0)] * dim
            row[node.index - 1] = Fraction(1)
            return NormalForm(0, dim, (Fraction(0),), (tuple(row),))
        if isinstance(node, Scale):
            return kids[0].scaled(node.coeff)
        if isinstance(node, Add):
            return kids[0] + kids[1]
        if isinstance(node, Diamond):
            return kids[0].shifted()
        if isinstance(node, (Apply, Sugar)):
            raise NotAffineError("normal forms exist only for expressions without activations")
        raise TypeError(f"not an expression node: {node!r}")

    nf = fold(e, step)
    if depth is not None and depth > nf.depth:
        nf = nf.padded(depth)
    return nf


def from_normal_form(nf: NormalForm) -> Expr:
    """``sum c ◇^i 1 + c ◇^i P_j`` with zero terms dropped; all-zero gives ``0*1``."""
    terms = []
    for i in range(nf.depth + 1):
        atoms = [(nf.c[i], ONE)] + [(nf.cf[i][j], Feature(j + 1)) for j in range(nf.dim)]
        for coeff, atom in atoms:
            if coeff == 0:
                continue
            body = D(atom, i)
            terms.append(body if coeff == 1 else Scale(coeff, body))
    if not terms:
        return Scale(Fraction(0), ONE)
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def negate_boolean(e: Expr, dim: int | None = None) -> Expr:
    """An affine expression positive exactly where ``e`` is not, on coloured graphs.

    With ``d`` the common denominator of the normal-form coefficients, every
    value of ``e`` is a multiple of ``1/d``; ``1/(2d) - e`` flips the sign test.
    """
    nf = to_normal_form(e, dim)
    k = Fraction(1, 2 * nf.lcd())
    return Add(Scale(k, ONE), Scale(Fraction(-1), e))
