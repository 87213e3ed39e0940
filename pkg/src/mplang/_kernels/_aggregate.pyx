# cython: language_level=3, boundscheck=False, wraparound=False
"""Neighbour aggregation over a CSR adjacency: out[v] = sum_{u ~ v} x[u]."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def neighbour_sum_int64(const cnp.int64_t[::1] indptr,
                        const cnp.int64_t[::1] indices,
                        const cnp.int64_t[::1] x):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, p
    cdef cnp.int64_t acc
    out = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    with nogil:
        for v in range(n):
            acc = 0
            for p in range(indptr[v], indptr[v + 1]):
                acc = acc + x[indices[p]]
            o[v] = acc
    return out


def neighbour_sum_float64(const cnp.int64_t[::1] indptr,
                          const cnp.int64_t[::1] indices,
                          const double[::1] x):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, p
    cdef double acc
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for v in range(n):
            acc = 0.0
            for p in range(indptr[v], indptr[v + 1]):
                acc = acc + x[indices[p]]
            o[v] = acc
    return out
