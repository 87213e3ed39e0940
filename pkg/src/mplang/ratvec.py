"""Exact rational node vectors stored as integer numerators over one denominator.

Numerators live in an int64 array while every intermediate is provably below
``2**62``; otherwise they are promoted to an object array of Python ints.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

_LIMIT = 1 << 62


def _maxabs(num: np.ndarray) -> int:
    if len(num) == 0:
        return 0
    if num.dtype == object:
        return max(abs(int(v)) for v in num)
    return int(np.abs(num).max())


def _to_object(num: np.ndarray) -> np.ndarray:
    if num.dtype == object:
        return num
    out = np.empty(len(num), dtype=object)
    out[:] = [int(v) for v in num]
    return out


def _maybe_int64(num: np.ndarray) -> np.ndarray:
    if num.dtype == object and _maxabs(num) < _LIMIT:
        return np.array([int(v) for v in num], dtype=np.int64)
    return num


def _mul(num: np.ndarray, k: int, bound: int) -> np.ndarray:
    """``num * k`` where ``bound`` is an upper bound on ``max|num|``."""
    if num.dtype != object and bound * abs(k) < _LIMIT:
        return num * np.int64(k)
    return _to_object(num) * k


class RatVec:
    """One exact rational per node: value[i] = num[i] / den."""

    __slots__ = ("num", "den", "_bound")

    def __init__(self, num, den: int = 1, _reduced: bool = False):
        if den <= 0:
            raise ValueError("denominator must be positive")
        num = np.asarray(num)
        if num.dtype != object and num.dtype != np.int64:
            num = num.astype(np.int64)
        bound = _maxabs(num)
        if not _reduced and den > 1 and len(num):
            if num.dtype == object:
                g = reduce(math.gcd, (int(v) for v in num), den)
            else:
                g = math.gcd(int(np.gcd.reduce(num)), den)
            if g > 1:
                num = num // g if num.dtype == object else num // np.int64(g)
                den //= g
                bound //= g
        if num.dtype == object and bound < _LIMIT:
            num = _maybe_int64(num)
        self.num = num
        self.den = den
        self._bound = bound

    # construction -----------------------------------------------------
    @classmethod
    def constant(cls, value, n: int) -> "RatVec":
        value = Fraction(value)
        if abs(value.numerator) < _LIMIT:
            num = np.full(n, value.numerator, dtype=np.int64)
        else:
            num = np.empty(n, dtype=object)
            num[:] = value.numerator
        return cls(num, value.denominator, _reduced=True)

    @classmethod
    def from_values(cls, values: Iterable) -> "RatVec":
        fr = [Fraction(v) for v in values]
        den = reduce(math.lcm, (f.denominator for f in fr), 1)
        ints = [f.numerator * (den // f.denominator) for f in fr]
        if ints and max(abs(i) for i in ints) >= _LIMIT:
            num = np.empty(len(ints), dtype=object)
            num[:] = ints
        else:
            num = np.array(ints, dtype=np.int64)
        return cls(num, den)

    # access -----------------------------------------------------------
    def __len__(self) -> int:
        return len(self.num)

    def __getitem__(self, i) -> Fraction:
        return Fraction(int(self.num[i]), self.den)

    def tolist(self) -> list[Fraction]:
        return [Fraction(int(v), self.den) for v in self.num]

    def to_float(self) -> np.ndarray:
        if self.num.dtype == object:
            return np.array([float(Fraction(int(v), self.den)) for v in self.num])
        return self.num.astype(np.float64) / self.den

    def __iter__(self):
        return iter(self.tolist())

    def __eq__(self, other) -> bool:
        if isinstance(other, RatVec):
            return (self.den == other.den and len(self) == len(other)
                    and all(int(a) == int(b) for a, b in zip(self.num, other.num)))
        if isinstance(other, (list, tuple)):
            return self.tolist() == [Fraction(v) for v in other]
        return NotImplemented

    def __repr__(self) -> str:
        from .scalar import format_scalar
        return "RatVec([" + ", ".join(format_scalar(v) for v in self.tolist()) + "])"

    # arithmetic -------------------------------------------------------
    def scale(self, c) -> "RatVec":
        c = Fraction(c)
        if c == 0:
            return RatVec.constant(0, len(self))
        return RatVec(_mul(self.num, c.numerator, self._bound), self.den * c.denominator)

    def __add__(self, other: "RatVec") -> "RatVec":
        den = math.lcm(self.den, other.den)
        a, b = den // self.den, den // other.den
        if (self.num.dtype != object and other.num.dtype != object
                and self._bound * a + other._bound * b < _LIMIT):
            num = self.num * np.int64(a) + other.num * np.int64(b)
        else:
            num = _to_object(self.num) * a + _to_object(other.num) * b
        return RatVec(num, den)

    def __neg__(self) -> "RatVec":
        return RatVec(-self.num, self.den, _reduced=True)

    def __sub__(self, other: "RatVec") -> "RatVec":
        return self + (-other)

    def add_scalar(self, c) -> "RatVec":
        return self + RatVec.constant(c, len(self))

    def neighbour_sum(self, indptr: np.ndarray, indices: np.ndarray, max_degree: int) -> "RatVec":
        if self.num.dtype != object and self._bound * max(max_degree, 1) < _LIMIT:
            num = _kernels.neighbour_sum_int64(indptr, indices, self.num)
        else:
            num = _kernels.neighbour_sum_object(indptr, indices, _to_object(self.num))
        return RatVec(num, self.den)

    # comparisons against a scalar threshold ---------------------------
    def sign_against(self, q) -> np.ndarray:
        """Elementwise sign of ``value - q`` as an int array in {-1, 0, 1}."""
        q = Fraction(q)
        lhs = _mul(self.num, q.denominator, self._bound)
        rhs = q.numerator * self.den
        if lhs.dtype != object and abs(rhs) < _LIMIT:
            return np.sign(lhs - np.int64(rhs)).astype(np.int64)
        return np.array([(v > rhs) - (v < rhs) for v in _to_object(lhs)], dtype=np.int64)

    def positive(self) -> np.ndarray:
        return np.asarray(self.num > 0, dtype=bool)

    @staticmethod
    def select(masks: Sequence[np.ndarray], vecs: Sequence["RatVec"]) -> "RatVec":
        """Piecewise combination: entry i taken from ``vecs[j]`` where ``masks[j][i]``."""
        den = reduce(math.lcm, (v.den for v in vecs), 1)
        n = len(vecs[0])
        use_object = any(v.num.dtype == object or v._bound * (den // v.den) >= _LIMIT for v in vecs)
        out = np.zeros(n, dtype=object if use_object else np.int64)
        for mask, v in zip(masks, vecs):
            scaled = _to_object(v.num) * (den // v.den) if use_object else v.num * np.int64(den // v.den)
            out[mask] = scaled[mask]
        return RatVec(out, den)
