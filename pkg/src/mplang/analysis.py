"""Walk signatures, shape reports on red-blue trees and the demo batteries."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .activation import RELU
from .errors import DimensionError, TranslationError
from .evaluator import booleanize, eval
from .expr import ONE, Apply, D, Diamond, Expr, Feature, activations_used, diamond_depth
from .graph import EmbeddedGraph, make_nonclosure_trees, make_rb_tree
from .parser import parse
from .ratvec import RatVec
from .scalar import format_scalar

NODE_TYPES = ("w", "w'", "red", "blue")
RB_COLOURS = ("red", "blue", "white")


# walk signatures ----------------------------------------------------------------

@dataclass(frozen=True)
class WalkSignature:
    """``walk_counts[i]`` is ◇ⁱ1 at the node, ``feature_sums[i][j]`` is ◇ⁱP_{j+1}."""

    depth: int
    walk_counts: tuple
    feature_sums: tuple


def walk_signatures(g: EmbeddedGraph, n: int) -> list[WalkSignature]:
    """Signatures of every node of ``g`` up to depth ``n``."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    size = g.node_count
    dim = g.dim if size else 0
    walks = RatVec.constant(1, size)
    feats = [g.feature(j + 1) for j in range(dim)]
    w_rows, f_rows = [], []
    for i in range(n + 1):
        if i:
            walks = walks.neighbour_sum(g.indptr, g.indices, g.max_degree)
            feats = [f.neighbour_sum(g.indptr, g.indices, g.max_degree) for f in feats]
        w_rows.append(walks.tolist())
        f_rows.append([f.tolist() for f in feats])
    return [WalkSignature(n, tuple(w_rows[i][v] for i in range(n + 1)),
                          tuple(tuple(f_rows[i][j][v] for j in range(dim)) for i in range(n + 1)))
            for v in range(size)]


def walk_signature(g: EmbeddedGraph, v: int, n: int) -> WalkSignature:
    if not 0 <= v < g.node_count:
        raise IndexError(f"node {v} not in graph with {g.node_count} nodes")
    return walk_signatures(g, n)[v]


@dataclass(frozen=True)
class WalkComparison:
    equivalent: bool
    # first differing observable, as an expression, with its two values
    witness: Optional[Expr] = None
    left: Optional[Fraction] = None
    right: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.equivalent


def walk_equivalent(g1: EmbeddedGraph, v1: int, g2: EmbeddedGraph, v2: int, n: int) -> WalkComparison:
    """Compare ◇ⁱ1 for i = 0..n, then ◇ⁱP_j; report the first mismatch."""
    if g1.dim != g2.dim:
        raise DimensionError(f"dimensions differ: {g1.dim} vs {g2.dim}")
    s1, s2 = walk_signature(g1, v1, n), walk_signature(g2, v2, n)
    for i in range(n + 1):
        if s1.walk_counts[i] != s2.walk_counts[i]:
            return WalkComparison(False, D(ONE, i), s1.walk_counts[i], s2.walk_counts[i])
    for i in range(n + 1):
        for j in range(g1.dim):
            if s1.feature_sums[i][j] != s2.feature_sums[i][j]:
                return WalkComparison(False, D(Feature(j + 1), i),
                                      s1.feature_sums[i][j], s2.feature_sums[i][j])
    return WalkComparison(True)


# red-blue tree shape reports ---------------------------------------------------

def _check_step_only(e: Expr) -> None:
    bad = [a.name for a in activations_used(e) if a.name != "step"]
    if bad:
        raise TranslationError(f"shape reports need step-only expressions, found {bad}")


def type_values(e: Expr, r: int, b: int, k: int) -> dict:
    """Distinct values of ``e`` per node type over admissible nodes of T[r,b,k]."""
    tree = make_rb_tree(r, b, k)
    values = eval(e, tree).tolist()
    limit = k - diamond_depth(e)
    out: dict[str, set] = {t: set() for t in NODE_TYPES}
    for v, val in enumerate(values):
        if tree.depth[v] <= limit:
            out[tree.node_type[v]].add(val)
    return out


@dataclass
class ShapeReport:
    params: tuple
    per_type: dict
    admissible_depth: int
    mirror_failures: list = field(default_factory=list)

    @property
    def singletons(self) -> bool:
        return all(len(vals) <= 1 for vals in self.per_type.values())

    @property
    def passed(self) -> bool:
        return self.singletons and not self.mirror_failures

    def rows(self) -> list[tuple]:
        r, b, _ = self.params
        out = []
        for t in NODE_TYPES:
            vals = sorted(self.per_type[t])
            out.append((r, b, t, ",".join(format_scalar(x) for x in vals) if vals else "-"))
        return out


def _only(vals: set):
    return next(iter(vals)) if len(vals) == 1 else None


def shape_report(e: Expr, r: int, b: int, margin_k: int) -> ShapeReport:
    """Per-type value sets of ``e`` on T[r,b,k] plus the red/blue mirror checks against T[b,r,k]."""
    _check_step_only(e)
    m = diamond_depth(e)
    if margin_k < m:
        raise ValueError(f"margin {margin_k} is below the ◇-depth {m}")
    here = type_values(e, r, b, margin_k)
    there = here if r == b else type_values(e, b, r, margin_k)
    failures = []
    for mine, theirs in (("red", "red"), ("blue", "blue"), ("w", "w'"), ("w'", "w")):
        x, y = _only(here[mine]), _only(there[theirs])
        if x is not None and y is not None and x != y:
            failures.append(f"{mine}({r},{b}) = {format_scalar(x)} but {theirs}({b},{r}) = {format_scalar(y)}")
    return ShapeReport((r, b, margin_k), here, margin_k - m, failures)


_CORPUS = (
    "1", "red", "blue", "white", "D 1", "D red", "D blue", "D white",
    "step(D red - D blue)", "step(D blue - D red)", "step(D red - 1)", "step(D blue - 2)",
    "step(D red + D blue - 3)", "D step(D red - D blue)", "step(D D red - D D blue)",
    "step(D D 1 - 5)", "D D D 1", "D D red - D D blue", "step(white + D red - 2)",
    "step(D step(D red - D blue) - 1/2)", "D (white + step(D red - 1))",
    "step(2 D red - 3 D blue + 1)", "step(D (red - blue))", "1 - step(D red)",
    "step(D step(D blue - 1))", "D D step(D red - D blue)", "step(D D D red - 4)",
    "step(red) + step(blue) - 1", "step(D (step(D red - 2) + step(D blue - 2)))",
    "1/2 D D white - 1/3 D red", "step(D 1 - D red - D blue)", "step(D white - 1)",
)


def shape_corpus(colours: Sequence[str] = RB_COLOURS) -> list[Expr]:
    """Hand-written step-only expressions over red, blue, white with ◇-depth at most 3."""
    return [parse(t, list(colours)) for t in _CORPUS]


# Q witness -----------------------------------------------------------------

def q_query(colours: Sequence[str] = RB_COLOURS) -> tuple[Expr, Expr]:
    """``relu(◇red − ◇blue)`` and its mirror ``relu(◇blue − ◇red)``."""
    red, blue = (Feature(colours.index(c) + 1) for c in ("red", "blue"))
    return (Apply(RELU, Diamond(red) - Diamond(blue)), Apply(RELU, Diamond(blue) - Diamond(red)))


@dataclass(frozen=True)
class SeparationRow:
    r: int
    b: int
    q: Fraction
    q_mirror: Fraction

    @property
    def ok(self) -> bool:
        return self.q == max(0, self.r - self.b) and self.q + self.q_mirror == abs(self.r - self.b)


def separation_demo(r_max: int, b_max: int, k: int) -> list[SeparationRow]:
    if k < 1:
        raise ValueError("k must be at least 1")
    q, q_mirror = q_query()
    rows = []
    for r in range(r_max + 1):
        for b in range(b_max + 1):
            tree = make_rb_tree(r, b, k)
            rows.append(SeparationRow(r, b, eval(q, tree)[tree.root], eval(q_mirror, tree)[tree.root]))
    return rows


def separation_rows(rows: Sequence[SeparationRow]) -> list[tuple]:
    out = []
    for row in rows:
        out.append((row.r, row.b, "Q", format_scalar(row.q)))
        out.append((row.r, row.b, "Q'", format_scalar(row.q_mirror)))
        out.append((row.r, row.b, "check", "ok" if row.ok else "FAIL"))
    return out


# tree-colouring invariants --------------------------------------------------------

@dataclass
class NonclosureReport:
    samples: int
    violations: list
    conjunction: tuple      # booleanized ◇red ∧ ◇blue at the three roots

    @property
    def separates(self) -> bool:
        return self.conjunction == (0, 1, 0)

    @property
    def passed(self) -> bool:
        return not self.violations and self.separates


def nonclosure_identities(e: Expr) -> tuple[bool, bool]:
    """Identities (root differences) and (leaf-sum differences) on the three colourings."""
    t1, t2, t3, root = make_nonclosure_trees()
    vals = [eval(e, t).tolist() for t in (t1, t2, t3)]
    roots = [v[root] for v in vals]
    leaves = [v[1] + v[2] for v in vals]
    return (roots[0] - roots[1] == roots[1] - roots[2],
            leaves[0] - leaves[1] == leaves[1] - leaves[2])


def nonclosure_demo(sample_count: int, seed: int = 0, depth: int = 3) -> NonclosureReport:
    from .randgen import random_affine
    if sample_count < 1:
        raise ValueError("sample count must be at least 1")
    rng = random.Random(seed)
    violations = []
    for _ in range(sample_count):
        e = random_affine(rng, 3, depth, size=rng.randint(1, 12))
        first, second = nonclosure_identities(e)
        if not (first and second):
            violations.append(e)
    t1, t2, t3, root = make_nonclosure_trees()
    phi = parse("D red & D blue", list(t1.colours))
    conj = tuple(int(booleanize(phi_e, t)[root]) for t in (t1, t2, t3) for phi_e in [_expand(phi)])
    return NonclosureReport(sample_count, violations, conj)


def _expand(e: Expr) -> Expr:
    from .translate import expand_sugar
    return expand_sugar(e)


def format_tsv(rows: Sequence[tuple], header: Sequence[str] = ("r", "b", "type", "value")) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"
