"""Independent brute-force references used by the tests.

Nothing here touches RatVec, the kernels or the vectorised evaluator: values
are computed node by node, straight from the definitions, with Fractions.
"""
from fractions import Fraction
from itertools import product

from mplang import expr as E
from mplang import logic as L


def adjacency(g):
    adj = [[] for _ in range(g.node_count)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def walks(g, v, length):
    """All walks with ``length`` edges starting at ``v`` (as node tuples)."""
    adj = adjacency(g)
    paths = [(v,)]
    for _ in range(length):
        paths = [p + (u,) for p in paths for u in adj[p[-1]]]
    return paths


def walk_count(g, v, length):
    return len(walks(g, v, length))


def walk_feature_sum(g, v, length, j):
    return sum(g.embedding[w[-1]][j - 1] for w in walks(g, v, length))


def ref_value(e, g, v, adj=None):
    """Tree semantics of ``e`` at node ``v``, by plain recursion."""
    adj = adj if adj is not None else adjacency(g)
    if isinstance(e, E.One):
        return Fraction(1)
    if isinstance(e, E.Feature):
        return Fraction(g.embedding[v][e.index - 1])
    if isinstance(e, E.Scale):
        return Fraction(e.coeff) * ref_value(e.body, g, v, adj)
    if isinstance(e, E.Add):
        return ref_value(e.left, g, v, adj) + ref_value(e.right, g, v, adj)
    if isinstance(e, E.Diamond):
        return sum((ref_value(e.body, g, u, adj) for u in adj[v]), Fraction(0))
    if isinstance(e, E.Apply):
        return ref_activation(e.act.name, ref_value(e.body, g, v, adj), e.act)
    raise TypeError(e)


def ref_activation(name, x, act=None):
    if name == "relu":
        return max(Fraction(0), x)
    if name == "trrelu":
        return max(Fraction(0), min(Fraction(1), x))
    if name == "sign":
        return Fraction((x > 0) - (x < 0))
    if name == "step":
        return Fraction(1 if x > 0 else 0)
    if name == "id":
        return x
    # user piecewise: piece i covers (b_{i-1}, b_i]
    for i, b in enumerate(act.breakpoints):
        if x <= b:
            slope, icpt = act.pieces[i]
            return slope * x + icpt
    slope, icpt = act.pieces[-1]
    return slope * x + icpt


def ref_eval(e, g):
    adj = adjacency(g)
    return [ref_value(e, g, v, adj) for v in range(g.node_count)]


def ref_normal_form_value(nf, g, v):
    """Σ c·(walks of length i) + Σ c_ij·(feature j summed over walk ends), by enumeration."""
    total = Fraction(0)
    for i in range(nf.depth + 1):
        ws = walks(g, v, i)
        total += nf.c[i] * len(ws)
        for j in range(nf.dim):
            total += nf.cf[i][j] * sum(Fraction(g.embedding[w[-1]][j]) for w in ws)
    return total


def ref_logic(phi, g, v, adj=None):
    adj = adj if adj is not None else adjacency(g)
    if isinstance(phi, L.Top):
        return True
    if isinstance(phi, L.Colour):
        return g.embedding[v][phi.index - 1] == 1
    if isinstance(phi, L.Not):
        return not ref_logic(phi.body, g, v, adj)
    if isinstance(phi, L.And):
        return ref_logic(phi.left, g, v, adj) and ref_logic(phi.right, g, v, adj)
    if isinstance(phi, L.Or):
        return ref_logic(phi.left, g, v, adj) or ref_logic(phi.right, g, v, adj)
    if isinstance(phi, (L.Dia, L.DiaGeq)):
        n = 1 if isinstance(phi, L.Dia) else phi.count
        return len({u for u in adj[v] if ref_logic(phi.body, g, u, adj)}) >= n
    if isinstance(phi, L.PresburgerAtom):
        total = sum(lam * len({u for u in adj[v] if ref_logic(sub, g, u, adj)}) for lam, sub in phi.terms)
        d = phi.delta
        return {">": total > d, "<": total < d, ">=": total >= d, "<=": total <= d,
                "=": total == d, "!=": total != d}[phi.op]
    raise TypeError(phi)


def root_to_leaf_diamond_counts(e):
    """Number of Diamond nodes on every root-to-leaf path (explicit enumeration)."""
    kids = E.children(e)
    here = 1 if isinstance(e, E.Diamond) else 0
    if not kids:
        return [here]
    return [here + c for k in kids for c in root_to_leaf_diamond_counts(k)]


def one_hot_rows(k):
    return [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
