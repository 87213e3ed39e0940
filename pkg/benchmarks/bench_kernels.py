"""Compare the compiled and numpy neighbour-sum kernels.

Usage: python benchmarks/bench_kernels.py [--nodes N] [--degree D] [--repeat R]

Both backends are imported side by side, checked for identical output, and
timed on a random graph in CSR form. A full expression evaluation is timed in
two subprocesses, one with ``MPLANG_PURE_PYTHON=1``.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from mplang._kernels import _numpy

try:
    from mplang._kernels import _aggregate
except ImportError:
    _aggregate = None


def random_csr(n, degree, seed=0):
    rng = np.random.default_rng(seed)
    m = n * degree // 2
    u = rng.integers(0, n, m)
    v = rng.integers(0, n, m)
    keep = u != v
    u, v = u[keep], v[keep]
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    return np.cumsum(indptr).astype(np.int64), dst.astype(np.int64)


EVAL_SCRIPT = """
import random, time
from mplang import BACKEND, eval, randgen
from mplang.graph import disjoint_union
rng = random.Random(1)
g, _ = disjoint_union([randgen.random_coloured_graph(rng, ("r", "b", "w"), 40, 20) for _ in range(500)])
exprs = [randgen.random_expr(rng, 3, 4, size=14) for _ in range(100)]
t = time.perf_counter()
for e in exprs:
    eval(e, g)
print(BACKEND, g.node_count, time.perf_counter() - t)
"""


def time_eval(pure):
    env = dict(os.environ)
    env.pop("MPLANG_PURE_PYTHON", None)
    if pure:
        env["MPLANG_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", EVAL_SCRIPT], env=env, check=True,
                         capture_output=True, text=True).stdout.split()
    return out[0], int(out[1]), float(out[2])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=200_000)
    ap.add_argument("--degree", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    indptr, indices = random_csr(args.nodes, args.degree)
    xi = np.random.default_rng(1).integers(-1000, 1000, args.nodes).astype(np.int64)
    xf = xi.astype(np.float64) / 7
    print(f"graph: {args.nodes} nodes, {len(indices)} directed edges")
    if _aggregate is None:
        print("compiled kernel not built; only the numpy timings are shown")
    print(f"{'kernel':<22}{'numpy ms':>10}{'cython ms':>11}{'speedup':>9}")
    for name, x in (("neighbour_sum_int64", xi), ("neighbour_sum_float64", xf)):
        ref = getattr(_numpy, name)
        t_np = min(timeit.repeat(lambda: ref(indptr, indices, x), number=1, repeat=args.repeat))
        if _aggregate is None:
            print(f"{name:<22}{t_np * 1e3:>10.2f}")
            continue
        fast = getattr(_aggregate, name)
        got, want = np.asarray(fast(indptr, indices, x)), ref(indptr, indices, x)
        # float sums are accumulated in a different order
        assert np.array_equal(got, want) if x.dtype == np.int64 else np.allclose(got, want, rtol=1e-12)
        t_cy = min(timeit.repeat(lambda: fast(indptr, indices, x), number=1, repeat=args.repeat))
        print(f"{name:<22}{t_np * 1e3:>10.2f}{t_cy * 1e3:>11.2f}{t_np / t_cy:>8.1f}x")

    print("\nexact evaluation, 100 expressions of depth 4:")
    for pure in (False, True):
        backend, n, secs = time_eval(pure)
        print(f"  backend={backend:<7} nodes={n}  {secs:.2f}s")


if __name__ == "__main__":
    main()
