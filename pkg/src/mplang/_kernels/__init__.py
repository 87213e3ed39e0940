"""Hot aggregation kernels with a compiled backend and a numpy fallback.

The compiled Cython module is used when it was built; setting
``MPLANG_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _numpy

try:
    if os.environ.get("MPLANG_PURE_PYTHON"):
        raise ImportError("pure backend requested")
    from . import _aggregate as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"
_impl = _compiled if _compiled is not None else _numpy

neighbour_sum_int64 = _impl.neighbour_sum_int64
neighbour_sum_float64 = _impl.neighbour_sum_float64


def neighbour_sum_object(indptr, indices, x):
    """Arbitrary-precision path for values that do not fit in int64."""
    import numpy as np

    n = len(indptr) - 1
    out = np.empty(n, dtype=object)
    for v in range(n):
        acc = 0
        for p in range(indptr[v], indptr[v + 1]):
            acc += x[indices[p]]
        out[v] = acc
    return out
