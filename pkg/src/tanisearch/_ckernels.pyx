# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch scoring kernels.

Same interface as _kernels_py. Accumulation is fixed left-to-right per row,
so results are independent of how the matrix is chunked across threads.
"""

from libc.math cimport sqrt, NAN

import numpy as np


def tanimoto_block(const double[:, ::1] block, const double[::1] ref):
    """Continuous Tanimoto of every row against `ref`; NaN where undefined."""
    cdef Py_ssize_t m = block.shape[0]
    cdef Py_ssize_t n = block.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] scores = out
    cdef double rr = 0.0, dd, rd, denom
    cdef Py_ssize_t i, j
    with nogil:
        for j in range(n):
            rr += ref[j] * ref[j]
        for i in range(m):
            dd = 0.0
            rd = 0.0
            for j in range(n):
                dd += block[i, j] * block[i, j]
                rd += block[i, j] * ref[j]
            denom = rr + dd - rd
            scores[i] = rd / denom if denom != 0.0 else NAN
    return out


def euclidean_block(const double[:, ::1] block, const double[::1] ref):
    """Euclidean distance of every row to `ref`."""
    cdef Py_ssize_t m = block.shape[0]
    cdef Py_ssize_t n = block.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] dists = out
    cdef double acc, diff
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(n):
                diff = block[i, j] - ref[j]
                acc += diff * diff
            dists[i] = sqrt(acc)
    return out


def weighted_euclidean_block(const double[:, ::1] block, const double[::1] ref,
                             const double[::1] w):
    """Weighted Euclidean distance sqrt(sum_j w_j * (x_j - y_j)^2) per row."""
    cdef Py_ssize_t m = block.shape[0]
    cdef Py_ssize_t n = block.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] dists = out
    cdef double acc, diff
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(n):
                diff = block[i, j] - ref[j]
                acc += w[j] * diff * diff
            dists[i] = sqrt(acc)
    return out
