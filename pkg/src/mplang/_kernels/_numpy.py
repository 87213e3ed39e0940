"""Pure numpy implementation of the aggregation kernels.

Reduction order matches the compiled kernel (ascending CSR position per row),
so float results are bit-identical between backends.
"""
import numpy as np


def _segment_sum(indptr, indices, x, dtype):
    n = len(indptr) - 1
    gathered = x[indices]
    out = np.zeros(n, dtype=dtype)
    if len(gathered) == 0:
        return out
    counts = np.diff(indptr)
    nonempty = counts > 0
    # reduceat on the row starts of non-empty rows; sums left to right
    out[nonempty] = np.add.reduceat(gathered, indptr[:-1][nonempty])
    return out


def neighbour_sum_int64(indptr, indices, x):
    return _segment_sum(indptr, indices, np.asarray(x, dtype=np.int64), np.int64)


def neighbour_sum_float64(indptr, indices, x):
    return _segment_sum(indptr, indices, np.asarray(x, dtype=np.float64), np.float64)
