"""GNN layers and models, and compilation between them and MPLang.

A layer maps channel vectors ``x`` to ``act_c(W1[c]·x(v) + W2[c]·Σ_{u~v} x(u) + b[c])``
with one activation tag per output channel.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Sequence

from . import activation as _act
from .activation import ID, Activation
from .errors import DimensionError, FeatureIndexError, GraphFormatError
from .expr import ONE, Add, Apply, D, Diamond, Expr, Feature, One, Scale, Sugar, fold
from .graph import EmbeddedGraph
from .ratvec import RatVec
from .scalar import as_scalar, format_scalar


@dataclass(frozen=True)
class GnnLayer:
    W1: tuple
    W2: tuple
    bias: tuple
    act: tuple

    def __post_init__(self):
        W1 = tuple(tuple(as_scalar(x) for x in row) for row in self.W1)
        W2 = tuple(tuple(as_scalar(x) for x in row) for row in self.W2)
        bias = tuple(as_scalar(x) for x in self.bias)
        acts = tuple(self.act)
        if len(W1) != len(W2) or any(len(a) != len(b) for a, b in zip(W1, W2)):
            raise DimensionError("W1 and W2 must have the same shape")
        if len({len(row) for row in W1}) > 1:
            raise DimensionError("weight rows have inconsistent lengths")
        if len(bias) != len(W1) or len(acts) != len(W1):
            raise DimensionError("bias and activation tags must have one entry per output channel")
        if not W1 or not W1[0]:
            raise DimensionError("layers need at least one input and one output channel")
        object.__setattr__(self, "W1", W1)
        object.__setattr__(self, "W2", W2)
        object.__setattr__(self, "bias", bias)
        object.__setattr__(self, "act", acts)

    @property
    def in_dim(self) -> int:
        return len(self.W1[0])

    @property
    def out_dim(self) -> int:
        return len(self.W1)


@dataclass(frozen=True)
class GnnModel:
    layers: tuple

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise DimensionError("a model needs at least one layer")
        for a, b in zip(layers, layers[1:]):
            if a.out_dim != b.in_dim:
                raise DimensionError(f"layer output {a.out_dim} does not feed input {b.in_dim}")
        if layers[-1].out_dim != 1:
            raise DimensionError("final layer must have output dimension 1")
        object.__setattr__(self, "layers", layers)

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim


def eval_gnn(m: GnnModel, g: EmbeddedGraph) -> RatVec:
    n = g.node_count
    if n and g.dim != m.in_dim:
        raise DimensionError(f"graph dimension {g.dim} does not match model input {m.in_dim}")
    xs = [g.feature(j + 1) if n else RatVec.constant(0, 0) for j in range(m.in_dim)]
    for layer in m.layers:
        agg: dict[int, RatVec] = {}
        out = []
        for c in range(layer.out_dim):
            pre = RatVec.constant(layer.bias[c], n)
            for j in range(layer.in_dim):
                w1, w2 = layer.W1[c][j], layer.W2[c][j]
                if w1:
                    pre = pre + xs[j].scale(w1)
                if w2:
                    if j not in agg:
                        agg[j] = xs[j].neighbour_sum(g.indptr, g.indices, g.max_degree)
                    pre = pre + agg[j].scale(w2)
            out.append(layer.act[c].apply(pre))
        xs = out
    return xs[0]


# compilation ----------------------------------------------------------------

@dataclass(frozen=True)
class _Form:
    """Pre-activation of layer ``layer`` over the outputs of layer ``layer - 1``.

    ``layer == 0`` marks a pure constant usable anywhere through the bias.
    """
    layer: int
    own: tuple      # ((channel, coeff), ...) sorted
    nbr: tuple
    const: Fraction

    def key(self, act):
        return (act, self.own, self.nbr, self.const)


def _combine(*pairs):
    acc: dict[int, Fraction] = {}
    for coeff, items in pairs:
        for ch, w in items:
            acc[ch] = acc.get(ch, Fraction(0)) + coeff * w
    return tuple(sorted((ch, w) for ch, w in acc.items() if w != 0))


class _Compiler:
    def __init__(self, dim: int):
        self.dim = dim
        self.layers: list[list] = [None]      # layers[t] = list of (act, form); index 0 unused
        self.index: list[dict] = [None]

    def channel(self, t: int, act: Activation, form: _Form) -> int:
        while len(self.layers) <= t:
            self.layers.append([])
            self.index.append({})
        key = form.key(act)
        if key not in self.index[t]:
            self.index[t][key] = len(self.layers[t])
            self.layers[t].append((act, form))
        return self.index[t][key]

    def one(self, t: int) -> int:
        return self.channel(t, ID, _Form(t, (), (), Fraction(1)))

    def ref(self, t: int, ch: int) -> _Form:
        """Form reading channel ``ch`` of layer ``t``."""
        return _Form(t + 1, ((ch, Fraction(1)),), (), Fraction(0))

    def lift(self, f: _Form, t: int) -> _Form:
        if f.layer == 0:
            return _Form(t, (), (), f.const) if t else f
        while f.layer < t:
            f = self.ref(f.layer, self.channel(f.layer, ID, f))
        return f

    def diamond(self, f: _Form) -> _Form:
        if f.layer == 0:
            if f.const == 0:
                return f
            return _Form(2, (), ((self.one(1), f.const),), Fraction(0))
        if not f.nbr and (f.const == 0 or f.layer >= 2):
            nbr = f.own
            if f.const:
                nbr = _combine((Fraction(1), nbr), (f.const, ((self.one(f.layer - 1), Fraction(1)),)))
            return _Form(f.layer, (), nbr, Fraction(0))
        return _Form(f.layer + 1, (), ((self.channel(f.layer, ID, f), Fraction(1)),), Fraction(0))

    def node(self, node, kids) -> _Form:
        if isinstance(node, One):
            return _Form(0, (), (), Fraction(1))
        if isinstance(node, Feature):
            if node.index > self.dim:
                raise FeatureIndexError(f"feature P{node.index} exceeds dimension {self.dim}")
            return _Form(1, ((node.index - 1, Fraction(1)),), (), Fraction(0))
        if isinstance(node, Scale):
            f = kids[0]
            c = node.coeff
            return _Form(f.layer, _combine((c, f.own)), _combine((c, f.nbr)), c * f.const)
        if isinstance(node, Add):
            t = max(kids[0].layer, kids[1].layer)
            a, b = self.lift(kids[0], t), self.lift(kids[1], t)
            one = Fraction(1)
            return _Form(t, _combine((one, a.own), (one, b.own)), _combine((one, a.nbr), (one, b.nbr)),
                         a.const + b.const)
        if isinstance(node, Diamond):
            return self.diamond(kids[0])
        if isinstance(node, Apply):
            f = kids[0]
            if f.layer == 0:
                return _Form(0, (), (), node.act(f.const))
            return self.ref(f.layer, self.channel(f.layer, node.act, f))
        if isinstance(node, Sugar):
            raise TypeError("expression contains Boolean sugar; call expand_sugar first")
        raise TypeError(f"not an expression node: {node!r}")

    def finish(self, root: _Form) -> GnnModel:
        if root.layer == 0:
            out_layer, out_ch = 1, self.channel(1, ID, _Form(1, (), (), root.const))
        elif root.layer >= 2 and not root.nbr and root.const == 0 and len(root.own) == 1 \
                and root.own[0][1] == 1:
            out_layer, out_ch = root.layer - 1, root.own[0][0]
        else:
            out_layer, out_ch = root.layer, self.channel(root.layer, ID, root)
        # mark live channels backwards from the output
        live = {out_layer: {out_ch}}
        for t in range(out_layer, 1, -1):
            need = set()
            for ch in live[t]:
                _, f = self.layers[t][ch]
                need.update(c for c, _ in f.own)
                need.update(c for c, _ in f.nbr)
            live[t - 1] = need
        layers = []
        prev_map = {j: j for j in range(self.dim)}
        prev_width = self.dim
        for t in range(1, out_layer + 1):
            chans = sorted(live.get(t, ()))
            if not chans:
                # nothing from earlier layers is read later; keep a zero channel for shape
                chans = []
            cur_map = {ch: i for i, ch in enumerate(chans)}
            W1, W2, bias, acts = [], [], [], []
            for ch in chans:
                act, f = self.layers[t][ch]
                r1, r2 = [Fraction(0)] * prev_width, [Fraction(0)] * prev_width
                for c, w in f.own:
                    r1[prev_map[c]] += w
                for c, w in f.nbr:
                    r2[prev_map[c]] += w
                W1.append(r1)
                W2.append(r2)
                bias.append(f.const)
                acts.append(act)
            if not chans:
                W1, W2, bias, acts = [[Fraction(0)] * prev_width], [[Fraction(0)] * prev_width], [Fraction(0)], [ID]
                cur_map = {}
            layers.append(GnnLayer(tuple(map(tuple, W1)), tuple(map(tuple, W2)), tuple(bias), tuple(acts)))
            prev_map = cur_map
            prev_width = len(W1)
        return GnnModel(tuple(layers))


def compile(e: Expr, dim: int) -> GnnModel:
    """A GNN with per-channel activation tags computing exactly ``e``."""
    if dim < 1:
        raise DimensionError("input dimension must be at least 1")
    comp = _Compiler(dim)
    return comp.finish(fold(e, comp.node))


def decompile(m: GnnModel) -> Expr:
    """Unfold a model back into an expression (subterms shared between channels)."""
    xs: list[Expr] = [Feature(j + 1) for j in range(m.in_dim)]
    for layer in m.layers:
        dias: dict[int, Expr] = {}
        out = []
        for c in range(layer.out_dim):
            terms = []
            for j in range(layer.in_dim):
                if layer.W1[c][j]:
                    terms.append(_term(layer.W1[c][j], xs[j]))
            for j in range(layer.in_dim):
                if layer.W2[c][j]:
                    dias.setdefault(j, Diamond(xs[j]))
                    terms.append(_term(layer.W2[c][j], dias[j]))
            if layer.bias[c]:
                terms.append(_term(layer.bias[c], ONE))
            body = terms[0] if terms else Scale(Fraction(0), ONE)
            for t in terms[1:]:
                body = Add(body, t)
            out.append(body if layer.act[c].kind == "id" else Apply(layer.act[c], body))
        xs = out
    return xs[0]


def _term(w, x):
    return x if w == 1 else Scale(w, x)


# model files ------------------------------------------------------------------

def dumps_model(m: GnnModel) -> str:
    """Canonical JSON text: one layer object per block, one matrix row per line."""
    def row(xs):
        return json.dumps([format_scalar(x) for x in xs])

    def matrix(rows):
        return "[\n" + ",\n".join("        " + row(r) for r in rows) + "\n      ]"

    blocks = []
    for layer in m.layers:
        blocks.append(
            "    {\n"
            f'      "W1": {matrix(layer.W1)},\n'
            f'      "W2": {matrix(layer.W2)},\n'
            f'      "bias": {row(layer.bias)},\n'
            f'      "act": {json.dumps([a.name for a in layer.act])}\n'
            "    }")
    return '{\n  "layers": [\n' + ",\n".join(blocks) + "\n  ]\n}\n"


def loads_model(text: str, catalogue: Optional[Mapping[str, Activation]] = None) -> GnnModel:
    try:
        doc = json.loads(text)
        layers = []
        for entry in doc["layers"]:
            acts = tuple(_act.lookup(name, catalogue) for name in entry["act"])
            layers.append(GnnLayer(entry["W1"], entry["W2"], entry["bias"], acts))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, _act.UnknownActivationError):
            raise
        raise GraphFormatError(f"malformed model file: {exc}") from None
    return GnnModel(tuple(layers))


def save_model(m: GnnModel, path) -> None:
    Path(path).write_text(dumps_model(m))


def load_model(path, catalogue=None) -> GnnModel:
    return loads_model(Path(path).read_text(), catalogue)
