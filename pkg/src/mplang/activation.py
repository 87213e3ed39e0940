"""Piecewise-affine activation functions with rational data.

A ``piecewise`` activation with breakpoints ``b_0 < ... < b_{m-1}`` has
``m + 1`` affine pieces; piece 0 covers ``(-inf, b_0]``, piece ``i`` covers
``(b_{i-1}, b_i]`` and the last piece covers ``(b_{m-1}, inf)``.  Each
breakpoint therefore belongs to the piece on its left, which is what makes
``step(0) = 0`` expressible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .errors import UnknownActivationError
from .ratvec import RatVec
from .scalar import as_scalar

KINDS = ("relu", "trrelu", "sign", "step", "id", "piecewise")


@dataclass(frozen=True)
class EventuallyConstant:
    t_minus: Fraction
    t_plus: Fraction
    f_minus: Fraction
    f_plus: Fraction

    @property
    def uneven(self) -> bool:
        return self.f_minus != self.f_plus


@dataclass(frozen=True, repr=False)
class Activation:
    name: str
    kind: str
    breakpoints: tuple = ()
    pieces: tuple = ()  # (slope, intercept) per interval
    meta: Optional[EventuallyConstant] = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if self.kind != "piecewise":
            return
        bps = tuple(as_scalar(b) for b in self.breakpoints)
        pcs = tuple((as_scalar(s), as_scalar(c)) for s, c in self.pieces)
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(pcs) != len(bps) + 1:
            raise ValueError("need exactly one affine piece per interval")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pcs)
        if self.meta is not None:
            _check_tails(self)

    def __repr__(self):
        return f"Activation({self.name!r})"

    # scalar semantics: the reference definition --------------------------
    def __call__(self, x) -> Fraction:
        x = as_scalar(x)
        k = self.kind
        if k == "relu":
            return max(Fraction(0), x)
        if k == "trrelu":
            return max(Fraction(0), min(Fraction(1), x))
        if k == "sign":
            return Fraction((x > 0) - (x < 0))
        if k == "step":
            return Fraction(int(x > 0))
        if k == "id":
            return x
        slope, icept = self.pieces[self._piece_index(x)]
        return slope * x + icept

    def _piece_index(self, x) -> int:
        for i, b in enumerate(self.breakpoints):
            if x <= b:
                return i
        return len(self.breakpoints)

    # vectorised semantics ---------------------------------------------
    def apply(self, v: RatVec) -> RatVec:
        k = self.kind
        n = len(v)
        if k == "id":
            return v
        if k == "step":
            return RatVec(v.num > 0, 1, _reduced=True)
        if k == "sign":
            return RatVec(np.sign(v.num).astype(np.int64) if v.num.dtype != object
                          else np.array([(x > 0) - (x < 0) for x in v.num], dtype=np.int64), 1, _reduced=True)
        if k == "relu":
            return RatVec(np.where(v.num > 0, v.num, 0 * v.num), v.den)
        if k == "trrelu":
            hi = RatVec.constant(1, n)
            zero = RatVec.constant(0, n)
            lo_mask = v.num <= 0
            hi_mask = v.sign_against(1) >= 0
            mid = ~(lo_mask | hi_mask)
            return RatVec.select([lo_mask, mid, hi_mask], [zero, v, hi])
        # piecewise
        if not self.breakpoints:
            s, c = self.pieces[0]
            return v.scale(s).add_scalar(c)
        masks, vecs = [], []
        prev = None
        for i, (s, c) in enumerate(self.pieces):
            if i < len(self.breakpoints):
                le = v.sign_against(self.breakpoints[i]) <= 0
            else:
                le = np.ones(n, dtype=bool)
            mask = le if prev is None else (le & ~prev)
            prev = le if prev is None else (prev | le)
            masks.append(mask)
            vecs.append(v.scale(s).add_scalar(c))
        return RatVec.select(masks, vecs)

    def apply_float(self, x: np.ndarray) -> np.ndarray:
        k = self.kind
        if k == "id":
            return x
        if k == "step":
            return (x > 0).astype(np.float64)
        if k == "sign":
            return np.sign(x)
        if k == "relu":
            return np.maximum(x, 0.0)
        if k == "trrelu":
            return np.clip(x, 0.0, 1.0)
        idx = np.searchsorted(np.array([float(b) for b in self.breakpoints]), x, side="left")
        slopes = np.array([float(s) for s, _ in self.pieces])
        icepts = np.array([float(c) for _, c in self.pieces])
        return slopes[idx] * x + icepts[idx]


def _check_tails(act: Activation) -> None:
    m = act.meta
    if not m.t_minus < m.t_plus:
        raise ValueError("eventually-constant metadata needs t_minus < t_plus")
    # every piece meeting (-inf, t_minus] must be the constant f_minus, and
    # every piece meeting [t_plus, inf) the constant f_plus
    bps = act.breakpoints
    for i, (s, c) in enumerate(act.pieces):
        lo = bps[i - 1] if i > 0 else None
        hi = bps[i] if i < len(bps) else None
        if lo is None or lo < m.t_minus:
            if s != 0 or c != m.f_minus:
                raise ValueError(f"{act.name}: left tail is not constant {m.f_minus} on (-inf, {m.t_minus}]")
        if hi is None or hi >= m.t_plus:
            if s != 0 or c != m.f_plus:
                raise ValueError(f"{act.name}: right tail is not constant {m.f_plus} on [{m.t_plus}, inf)")
    if act(m.t_minus) != m.f_minus or act(m.t_plus) != m.f_plus:
        raise ValueError(f"{act.name}: tail values disagree with the function")


def eventually_constant(t_minus, t_plus, f_minus, f_plus) -> EventuallyConstant:
    return EventuallyConstant(*(as_scalar(x) for x in (t_minus, t_plus, f_minus, f_plus)))


def piecewise(name: str, breakpoints, pieces, meta=None, infer_meta: bool = True) -> Activation:
    """Build a user-defined piecewise-affine activation.

    When ``meta`` is omitted and both outer pieces are constant, the
    eventually-constant metadata is inferred with ``t_minus = b_0`` and
    ``t_plus = b_{m-1} + 1``.
    """
    act = Activation(name, "piecewise", tuple(breakpoints), tuple(pieces))
    if meta is None and infer_meta and act.breakpoints:
        (s0, c0), (s1, c1) = act.pieces[0], act.pieces[-1]
        if s0 == 0 and s1 == 0:
            meta = EventuallyConstant(act.breakpoints[0], act.breakpoints[-1] + 1, c0, c1)
    if meta is None:
        return act
    return Activation(name, "piecewise", act.breakpoints, act.pieces, meta)


RELU = Activation("relu", "relu")
TRRELU = Activation("trrelu", "trrelu", meta=eventually_constant(0, 1, 0, 1))
SIGN = Activation("sign", "sign", meta=eventually_constant(-1, 1, -1, 1))
STEP = Activation("step", "step", meta=eventually_constant(0, 1, 0, 1))
ID = Activation("id", "id")

CATALOGUE: Mapping[str, Activation] = {a.name: a for a in (RELU, TRRELU, SIGN, STEP, ID)}


def lookup(name: str, catalogue: Optional[Mapping[str, Activation]] = None) -> Activation:
    table = CATALOGUE if catalogue is None else {**CATALOGUE, **catalogue}
    try:
        return table[name]
    except KeyError:
        raise UnknownActivationError(name) from None
