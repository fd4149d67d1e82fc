# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled merge-scan kernels over pre-sorted score arrays."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def merge_groups(const double[::1] a, const double[::1] b):
    """Distinct values of ``a ∪ b`` with their multiplicity in each input."""
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0]
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef double v
    cdef cnp.int64_t ca, cb
    values = np.empty(n + m, dtype=np.float64)
    count_a = np.empty(n + m, dtype=np.int64)
    count_b = np.empty(n + m, dtype=np.int64)
    cdef double[::1] vv = values
    cdef cnp.int64_t[::1] va = count_a
    cdef cnp.int64_t[::1] vb = count_b
    with nogil:
        while i < n or j < m:
            if j >= m or (i < n and a[i] <= b[j]):
                v = a[i]
            else:
                v = b[j]
            ca = 0
            while i < n and a[i] == v:
                ca += 1
                i += 1
            cb = 0
            while j < m and b[j] == v:
                cb += 1
                j += 1
            vv[k] = v
            va[k] = ca
            vb[k] = cb
            k += 1
    return values[:k].copy(), count_a[:k].copy(), count_b[:k].copy()


def count_below(const double[::1] s, const double[::1] grid, bint inclusive):
    """For each grid value ``g`` count entries of ``s`` that are ``<= g`` (or ``< g``).

    Both inputs must be sorted ascending.
    """
    cdef Py_ssize_t n = s.shape[0], g = grid.shape[0]
    cdef Py_ssize_t i = 0, k
    out = np.empty(g, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    with nogil:
        for k in range(g):
            if inclusive:
                while i < n and s[i] <= grid[k]:
                    i += 1
            else:
                while i < n and s[i] < grid[k]:
                    i += 1
            o[k] = i
    return out


def mann_whitney_u2(const double[::1] neg, const double[::1] pos):
    """Twice the Mann-Whitney U of ``pos`` over ``neg`` (ties count one half)."""
    cdef Py_ssize_t n = neg.shape[0], m = pos.shape[0]
    cdef Py_ssize_t i = 0, j = 0
    cdef double v
    cdef cnp.int64_t below = 0, cn, cp, u2 = 0
    with nogil:
        while j < m:
            v = pos[j]
            while i < n and neg[i] < v:
                i += 1
                below += 1
            cn = 0
            while i < n and neg[i] == v:
                i += 1
                cn += 1
            cp = 0
            while j < m and pos[j] == v:
                j += 1
                cp += 1
            u2 += cp * (2 * below + cn)
            below += cn
    return int(u2)
