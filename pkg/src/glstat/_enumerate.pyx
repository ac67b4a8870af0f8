# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled enumeration of kernel values over all m-subsets.

All routines expect the sample sorted ascending; the enumeration then
visits index tuples i_1 < ... < i_m in lexicographic order and sums
arguments left to right, which is the same arithmetic the scalar kernels
use after sorting their arguments.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY
from libcpp.algorithm cimport nth_element, sort

from ._errors import DegenerateKernelError, WindowEstimatorError

cnp.import_array()


cdef int _next_combination(Py_ssize_t* idx, int m, Py_ssize_t n) noexcept nogil:
    cdef int k = m - 1
    cdef int j
    while k >= 0 and idx[k] == n - m + k:
        k -= 1
    if k < 0:
        return 0
    idx[k] += 1
    for j in range(k + 1, m):
        idx[j] = idx[j - 1] + 1
    return 1


cdef Py_ssize_t _sum_fill(const double* x, Py_ssize_t n, int m, double divisor,
                          double* out) noexcept nogil:
    cdef Py_ssize_t i, j, k, l, pos = 0
    cdef double s1, s2, s3
    cdef Py_ssize_t idx[64]
    cdef int t
    if m == 1:
        for i in range(n):
            out[pos] = x[i] / divisor
            pos += 1
    elif m == 2:
        for i in range(n):
            for j in range(i + 1, n):
                out[pos] = (x[i] + x[j]) / divisor
                pos += 1
    elif m == 3:
        for i in range(n):
            for j in range(i + 1, n):
                s2 = x[i] + x[j]
                for k in range(j + 1, n):
                    out[pos] = (s2 + x[k]) / divisor
                    pos += 1
    else:
        for t in range(m):
            idx[t] = t
        while True:
            s1 = x[idx[0]]
            for t in range(1, m):
                s1 = s1 + x[idx[t]]
            out[pos] = s1 / divisor
            pos += 1
            if not _next_combination(idx, m, n):
                break
    return pos


cdef Py_ssize_t _gm_fill(const double* lg, Py_ssize_t n, int m, double scale,
                         bint ties_to_inf, double* out) noexcept nogil:
    # returns -1 on a degenerate subset when ties are not mapped to +inf
    cdef Py_ssize_t i, j, k, l, pos = 0
    cdef double s2, s3, d, lo
    cdef Py_ssize_t idx[64]
    cdef int t
    cdef double fm = m
    if m == 2:
        for i in range(n):
            lo = lg[i]
            for j in range(i + 1, n):
                if lg[j] == lo:
                    if not ties_to_inf:
                        return -1
                    out[pos] = INFINITY
                else:
                    d = (lo + lg[j]) / fm - lo
                    out[pos] = scale / d if d > 0 else INFINITY
                pos += 1
    elif m == 3:
        for i in range(n):
            lo = lg[i]
            for j in range(i + 1, n):
                s2 = lo + lg[j]
                for k in range(j + 1, n):
                    if lg[k] == lo:
                        if not ties_to_inf:
                            return -1
                        out[pos] = INFINITY
                    else:
                        d = (s2 + lg[k]) / fm - lo
                        out[pos] = scale / d if d > 0 else INFINITY
                    pos += 1
    elif m == 4:
        for i in range(n):
            lo = lg[i]
            for j in range(i + 1, n):
                s2 = lo + lg[j]
                for k in range(j + 1, n):
                    s3 = s2 + lg[k]
                    for l in range(k + 1, n):
                        if lg[l] == lo:
                            if not ties_to_inf:
                                return -1
                            out[pos] = INFINITY
                        else:
                            d = (s3 + lg[l]) / fm - lo
                            out[pos] = scale / d if d > 0 else INFINITY
                        pos += 1
    else:
        for t in range(m):
            idx[t] = t
        while True:
            lo = lg[idx[0]]
            if lg[idx[m - 1]] == lo:
                if not ties_to_inf:
                    return -1
                out[pos] = INFINITY
            else:
                s2 = lo
                for t in range(1, m):
                    s2 = s2 + lg[idx[t]]
                d = s2 / fm - lo
                out[pos] = scale / d if d > 0 else INFINITY
            pos += 1
            if not _next_combination(idx, m, n):
                break
    return pos


def sum_kernel_values(const double[::1] x_sorted, int m, double divisor, Py_ssize_t count):
    """Values (x_{i_1} + ... + x_{i_m}) / divisor over all index subsets."""
    if m > 64:
        raise ValueError("kernel dimension above 64 is not supported")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(count, dtype=np.float64)
    cdef double* op = <double*> out.data
    cdef Py_ssize_t n = x_sorted.shape[0]
    with nogil:
        _sum_fill(&x_sorted[0], n, m, divisor, op)
    return out


def gm_kernel_values(const double[::1] logs_sorted, int m, double scale,
                     bint ties_to_inf, Py_ssize_t count):
    """GM kernel values scale / (mean(log x) - log min x) over all index subsets."""
    if m > 64:
        raise ValueError("kernel dimension above 64 is not supported")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(count, dtype=np.float64)
    cdef double* op = <double*> out.data
    cdef Py_ssize_t n = logs_sorted.shape[0], got
    with nogil:
        got = _gm_fill(&logs_sorted[0], n, m, scale, ties_to_inf, op)
    if got < 0:
        raise DegenerateKernelError("GM kernel evaluated on equal arguments")
    return out


def gm_window_quantiles(const double[::1] logs, Py_ssize_t b, int m, double scale,
                        bint ties_to_inf, Py_ssize_t count, Py_ssize_t rank):
    """Order statistic of rank ``rank`` (1-based) of the GM kernel values on
    every window of the log-series, logs[i:i+b] for i = 0..n-b."""
    cdef Py_ssize_t n = logs.shape[0]
    cdef Py_ssize_t nw = n - b + 1
    cdef Py_ssize_t i, t, got = 0, bad = -1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] result = np.empty(nw, dtype=np.float64)
    cdef double* res = <double*> result.data
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lwin = np.empty(b, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(count, dtype=np.float64)
    cdef double* lw = <double*> lwin.data
    cdef double* bp = <double*> buf.data
    with nogil:
        for i in range(nw):
            for t in range(b):
                lw[t] = logs[i + t]
            sort(lw, lw + b)
            got = _gm_fill(lw, b, m, scale, ties_to_inf, bp)
            if got < 0:
                bad = i
                break
            nth_element(bp, bp + rank - 1, bp + count)
            res[i] = bp[rank - 1]
    if bad >= 0:
        raise WindowEstimatorError(
            bad, DegenerateKernelError("GM kernel evaluated on equal arguments"))
    return result


def select_rank(cnp.ndarray[cnp.float64_t, ndim=1] values, Py_ssize_t rank):
    """The order statistic of 1-based ``rank``; partially reorders ``values`` in place."""
    cdef double* vp = <double*> values.data
    cdef Py_ssize_t count = values.shape[0]
    with nogil:
        nth_element(vp, vp + rank - 1, vp + count)
    return vp[rank - 1]
