"""Embedded and coloured graphs, the graph file format, and witness families."""
from __future__ import annotations

import json
from collections import deque
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GraphFormatError
from .ratvec import RatVec
from .scalar import as_scalar, format_scalar

RED_BLUE_WHITE = ("red", "blue", "white")


class EmbeddedGraph:
    """Finite simple undirected graph with one rational feature row per node."""

    def __init__(self, node_count: int, edges: Iterable[Sequence[int]], embedding: Sequence[Sequence]):
        n = int(node_count)
        if n < 0:
            raise GraphFormatError("node count must be non-negative")
        seen = set()
        for e in edges:
            if len(e) != 2:
                raise GraphFormatError(f"edge {e!r} must have two endpoints")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key}")
            seen.add(key)
        rows = [tuple(as_scalar(x) for x in row) for row in embedding]
        if len(rows) != n:
            raise GraphFormatError(f"expected {n} embedding rows, got {len(rows)}")
        dims = {len(r) for r in rows}
        if len(dims) > 1:
            raise GraphFormatError("embedding rows have inconsistent lengths")
        dim = dims.pop() if dims else None
        if dim is not None and dim < 1:
            raise GraphFormatError("embedding dimension must be at least 1")
        self.node_count = n
        self.edges = tuple(sorted(seen))
        self.embedding = tuple(rows)
        self._dim = dim
        self._build_csr()
        self._columns: dict[int, RatVec] = {}

    def _build_csr(self):
        n = self.node_count
        adj = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        self._adj = tuple(tuple(row) for row in adj)
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        if n:
            self.indptr[1:] = np.cumsum([len(r) for r in adj])
        self.indices = np.array([u for row in adj for u in row], dtype=np.int64)
        self.max_degree = max((len(r) for r in adj), default=0)

    @property
    def dim(self) -> int:
        if self._dim is None:
            raise GraphFormatError("empty graph has no embedding dimension")
        return self._dim

    def neighbours(self, v: int) -> tuple:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def feature(self, j: int) -> RatVec:
        """Column ``j`` (1-based) of the embedding as an exact vector."""
        col = self._columns.get(j)
        if col is None:
            col = RatVec.from_values(row[j - 1] for row in self.embedding)
            self._columns[j] = col
        return col

    def feature_float(self, j: int) -> np.ndarray:
        return np.array([float(row[j - 1]) for row in self.embedding], dtype=np.float64)

    def __len__(self):
        return self.node_count

    def __eq__(self, other):
        if not isinstance(other, EmbeddedGraph):
            return NotImplemented
        return (self.node_count == other.node_count and self.edges == other.edges
                and self.embedding == other.embedding
                and getattr(self, "colours", None) == getattr(other, "colours", None))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.node_count}, edges={len(self.edges)}, dim={self._dim})"

    def is_one_hot(self) -> bool:
        return all(sum(1 for x in row if x == 1) == 1 and all(x in (0, 1) for x in row)
                   for row in self.embedding)


class ColouredGraph(EmbeddedGraph):
    """Embedded graph whose rows are one-hot colour indicators."""

    def __init__(self, node_count, edges, embedding, colours: Sequence[str]):
        super().__init__(node_count, edges, embedding)
        self.colours = tuple(colours)
        rows = self.embedding
        if rows and len(self.colours) != self.dim:
            raise GraphFormatError(f"{len(self.colours)} colour names for dimension {self.dim}")
        for v, row in enumerate(rows):
            if not (all(x in (0, 1) for x in row) and sum(row) == 1):
                raise GraphFormatError(f"row {v} is not one-hot: {[format_scalar(x) for x in row]}")

    @classmethod
    def from_colours(cls, node_count, edges, node_colours: Sequence[str], colours: Sequence[str]):
        index = {c: i for i, c in enumerate(colours)}
        rows = []
        for c in node_colours:
            row = [0] * len(colours)
            row[index[c]] = 1
            rows.append(row)
        return cls(node_count, edges, rows, colours)

    def colour_of(self, v: int) -> str:
        return self.colours[self.embedding[v].index(1)]

    def colour_index(self, name: str) -> int:
        """1-based feature index of a colour."""
        return self.colours.index(name) + 1


class RbTree(ColouredGraph):
    """A built red-blue symmetric tree with per-node type and depth tags.

    ``node_type`` is one of ``w``, ``w'``, ``red``, ``blue`` for every node;
    leaves are the nodes with ``depth == k``.  ``complete`` is False when
    the degree quotas cannot be met (exactly one of ``r``, ``b`` is zero and
    ``k >= 3``); the construction then clamps missing children at zero.
    """

    def __init__(self, node_count, edges, node_colours, root, node_type, depth, params, complete):
        rows = []
        for c in node_colours:
            row = [0, 0, 0]
            row[RED_BLUE_WHITE.index(c)] = 1
            rows.append(row)
        super().__init__(node_count, edges, rows, RED_BLUE_WHITE)
        self.root = root
        self.node_type = tuple(node_type)
        self.depth = tuple(depth)
        self.params = params
        self.complete = complete

    def census(self) -> list[str]:
        """Quota violations among nodes of depth < k (empty when the invariants hold)."""
        r, b, k = self.params
        problems = []
        for v in range(self.node_count):
            if self.depth[v] >= k:
                continue
            nbr = self.neighbours(v)
            t = self.node_type[v]
            if t in ("w", "w'"):
                reds = sum(1 for u in nbr if self.node_type[u] == "red")
                blues = sum(1 for u in nbr if self.node_type[u] == "blue")
                want = (r, b) if t == "w" else (b, r)
                if (reds, blues) != want or reds + blues != len(nbr):
                    problems.append(f"node {v} ({t}) has {reds} red, {blues} blue; want {want}")
            else:
                kinds = sorted(self.node_type[u] for u in nbr)
                if kinds != ["w", "w'"]:
                    problems.append(f"node {v} ({t}) has white neighbours {kinds}")
        return problems


# generators ---------------------------------------------------------------

def make_star(a: int, b: int) -> tuple[ColouredGraph, int]:
    """White centre (node 0) with ``a`` red then ``b`` blue leaves."""
    if a < 0 or b < 0:
        raise ValueError("leaf counts must be non-negative")
    colours = ["white"] + ["red"] * a + ["blue"] * b
    edges = [(0, i) for i in range(1, 1 + a + b)]
    return ColouredGraph.from_colours(1 + a + b, edges, colours, RED_BLUE_WHITE), 0


def make_path_example() -> tuple[tuple[ColouredGraph, int], tuple[ColouredGraph, int]]:
    """The two 2-colourings of the path v0..v4, both pointed at v1."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 4)]
    c = ["blue", "red", "red", "red", "blue"]
    c_prime = ["red", "red", "blue", "red", "red"]
    colours = ("red", "blue")
    return ((ColouredGraph.from_colours(5, edges, c, colours), 1),
            (ColouredGraph.from_colours(5, edges, c_prime, colours), 1))


def make_rb_tree(r: int, b: int, k: int) -> RbTree:
    if r < 0 or b < 0 or k < 0:
        raise ValueError("r, b, k must be non-negative")
    colours, types, depths, parents = ["white"], ["w"], [0], [-1]
    edges = []
    complete = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        if depths[v] >= k:
            continue
        t = types[v]
        children = []
        if t in ("w", "w'"):
            want_red, want_blue = (r, b) if t == "w" else (b, r)
            p = parents[v]
            if p >= 0:
                if types[p] == "red":
                    want_red -= 1
                else:
                    want_blue -= 1
            if want_red < 0 or want_blue < 0:
                complete = False
            children = ["red"] * max(want_red, 0) + ["blue"] * max(want_blue, 0)
            child_types = children
        else:
            child_types = ["w'" if types[parents[v]] == "w" else "w"]
            children = ["white"]
        for colour, ctype in zip(children, child_types):
            u = len(colours)
            colours.append(colour)
            types.append(ctype)
            depths.append(depths[v] + 1)
            parents.append(v)
            edges.append((v, u))
            queue.append(u)
    return RbTree(len(colours), edges, colours, 0, types, depths, (r, b, k), complete)


def rb_tree_feasible(r: int, b: int, k: int) -> bool:
    """Whether the build of T[r,b,k] meets every quota below depth ``k``.

    With exactly one of ``r``, ``b`` zero a ``w'`` node would need no
    neighbour of its parent's colour, so the quotas fail from ``k = 3`` on.
    """
    return k <= 2 or (r == 0) == (b == 0)


def make_nonclosure_trees() -> tuple[ColouredGraph, ColouredGraph, ColouredGraph, int]:
    """Root with two leaf children; leaves blue/blue, blue/red, red/red; root white.

    Colours are ordered (white, blue, red) so that P1, P2, P3 are white,
    blue, red as in the inductive base cases.
    """
    colours = ("white", "blue", "red")
    edges = [(0, 1), (0, 2)]
    leaves = (("blue", "blue"), ("blue", "red"), ("red", "red"))
    trees = tuple(ColouredGraph.from_colours(3, edges, ["white", *pair], colours) for pair in leaves)
    return trees[0], trees[1], trees[2], 0


def disjoint_union(graphs: Sequence[EmbeddedGraph]) -> tuple[EmbeddedGraph, list[int]]:
    """Union with node ids shifted; returns the graph and each part's offset."""
    offsets, edges, rows = [], [], []
    total = 0
    for g in graphs:
        offsets.append(total)
        edges.extend((u + total, v + total) for u, v in g.edges)
        rows.extend(g.embedding)
        total += g.node_count
    colour_sets = {getattr(g, "colours", None) for g in graphs}
    if len(colour_sets) == 1 and None not in colour_sets:
        return ColouredGraph(total, edges, rows, colour_sets.pop()), offsets
    return EmbeddedGraph(total, edges, rows), offsets


# file format --------------------------------------------------------------

def dumps(g: EmbeddedGraph) -> str:
    """Canonical serialisation: fixed key order, one node row and one edge per line."""
    coloured = isinstance(g, ColouredGraph)
    lines = ["{", f'  "dim": {g._dim if g._dim is not None else 0},',
             f'  "mode": "{"coloured" if coloured else "embedded"}",']
    if coloured:
        lines.append(f'  "colours": {json.dumps(list(g.colours))},')
    lines.append('  "nodes": [' + ("" if g.embedding else "],"))
    for i, row in enumerate(g.embedding):
        sep = "," if i < len(g.embedding) - 1 else ""
        lines.append("    " + json.dumps([format_scalar(x) for x in row]) + sep)
    if g.embedding:
        lines.append("  ],")
    lines.append('  "edges": [' + ("" if g.edges else "]"))
    for i, (u, v) in enumerate(g.edges):
        sep = "," if i < len(g.edges) - 1 else ""
        lines.append(f"    [{u}, {v}]{sep}")
    if g.edges:
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> EmbeddedGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"malformed graph file: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphFormatError("graph file must be a JSON object")
    for key in ("dim", "mode", "nodes", "edges"):
        if key not in doc:
            raise GraphFormatError(f"missing field {key!r}")
    mode = doc["mode"]
    if mode not in ("embedded", "coloured"):
        raise GraphFormatError(f"unknown mode {mode!r}")
    try:
        rows = [[as_scalar(x) for x in row] for row in doc["nodes"]]
    except (TypeError, ValueError) as exc:
        raise GraphFormatError(f"bad node entry: {exc}") from None
    dim = doc["dim"]
    for i, row in enumerate(rows):
        if len(row) != dim:
            raise GraphFormatError(f"node {i} has {len(row)} entries but dim is {dim}")
    edges = doc["edges"]
    if mode == "coloured":
        colours = doc.get("colours")
        if colours is None:
            raise GraphFormatError("coloured mode requires a 'colours' field")
        return ColouredGraph(len(rows), edges, rows, colours)
    return EmbeddedGraph(len(rows), edges, rows)


def save(g: EmbeddedGraph, path) -> None:
    Path(path).write_text(dumps(g))


def load(path) -> EmbeddedGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from None
    return loads(text)
