# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def laguerre_values(double alpha, int degree, x):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t m = xv.shape[0]
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j
    cdef int k
    cdef double prev, cur, nxt, xx
    for j in range(m):
        xx = xv[j]
        prev = 1.0
        if degree == 0:
            out[j] = 1.0
            continue
        cur = 1.0 + alpha - xx
        for k in range(1, degree):
            nxt = ((2 * k + 1 + alpha - xx) * cur - (k + alpha) * prev) / (k + 1)
            prev = cur
            cur = nxt
        out[j] = cur
    return out_arr.reshape(np.shape(x))


cdef inline long long _comb(long long a, long long b) nogil:
    # exact: every partial product r * (a - b + i) / i is itself a binomial
    cdef long long r = 1, i
    if b < 0 or a < 0 or b > a:
        return 0
    if b > a - b:
        b = a - b
    for i in range(1, b + 1):
        r = r * (a - b + i) // i
    return r


cdef long long _rank(long long[::1] nu, int n) nogil:
    cdef long long level = 0
    cdef int i
    cdef long long v, parts, remaining, rank
    for i in range(n):
        level += nu[i]
    rank = _comb(level - 1 + n, n) if level > 0 else 0
    remaining = level
    for i in range(n - 1):
        parts = n - i - 1
        for v in range(nu[i]):
            rank += _comb(remaining - v + parts - 1, parts - 1)
        remaining -= nu[i]
    return rank


def fock_rank(nu, int n):
    cdef long long[::1] arr = np.ascontiguousarray(nu, dtype=np.int64)
    return int(_rank(arr, n))


def fock_lower_entries(states, int mode):
    cdef long long[:, ::1] st = np.ascontiguousarray(states, dtype=np.int64)
    cdef Py_ssize_t count = st.shape[0]
    cdef int n = st.shape[1]
    cdef Py_ssize_t col
    rows_arr = np.empty(count, dtype=np.int64)
    cols_arr = np.empty(count, dtype=np.int64)
    vals_arr = np.empty(count, dtype=np.float64)
    cdef long long[::1] rows = rows_arr
    cdef long long[::1] cols = cols_arr
    cdef double[::1] vals = vals_arr
    cdef long long[::1] work = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t nnz = 0
    cdef long long occ
    cdef int i
    for col in range(count):
        occ = st[col, mode]
        if occ == 0:
            continue
        for i in range(n):
            work[i] = st[col, i]
        work[mode] = occ - 1
        rows[nnz] = _rank(work, n)
        cols[nnz] = col
        vals[nnz] = sqrt(<double>occ)
        nnz += 1
    return rows_arr[:nnz], cols_arr[:nnz], vals_arr[:nnz]
