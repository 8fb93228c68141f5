# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled set-containment kernels over uint64 query bitsets."""

import numpy as np

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free
from libcpp.vector cimport vector

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef void _emit_completions(int n, int k, int depth, int start, int* idx,
                            vector[int]& out) noexcept nogil:
    cdef int v, j
    for v in range(start, n - (k - depth) + 1):
        idx[depth] = v
        if depth == k - 1:
            for j in range(k):
                out.push_back(idx[j])
        else:
            _emit_completions(n, k, depth + 1, v + 1, idx, out)


cdef void _comp_rec(const uint64_t[:, ::1] cols, int n, int W, int k, int depth,
                    int start, uint64_t* prefix, int* idx,
                    vector[int]& out) noexcept nogil:
    cdef int v, w, j
    cdef uint64_t* cur = prefix + depth * W
    cdef uint64_t* prev = prefix + (depth - 1) * W
    cdef uint64_t acc
    for v in range(start, n - (k - depth) + 1):
        idx[depth] = v
        acc = 0
        if depth == 0:
            for w in range(W):
                cur[w] = cols[v, w]
                acc |= cur[w]
        else:
            for w in range(W):
                cur[w] = prev[w] & cols[v, w]
                acc |= cur[w]
        if depth == k - 1:
            if acc == 0:
                for j in range(k):
                    out.push_back(idx[j])
        elif acc == 0:
            # no negative query holds this prefix, so none holds any extension
            _emit_completions(n, k, depth + 1, v + 1, idx, out)
        else:
            _comp_rec(cols, n, W, k, depth + 1, v + 1, prefix, idx, out)


def comp_survivors(const uint64_t[:, ::1] neg_cols, int k):
    """k-subsets (lex order) whose vertices share no negative query."""
    cdef int n = neg_cols.shape[0]
    cdef int W = neg_cols.shape[1]
    cdef vector[int] out
    cdef uint64_t* prefix = <uint64_t*> malloc(max(1, k * W) * sizeof(uint64_t))
    cdef int* idx = <int*> malloc(k * sizeof(int))
    if prefix == NULL or idx == NULL:
        free(prefix)
        free(idx)
        raise MemoryError()
    try:
        if k <= n:
            with nogil:
                _comp_rec(neg_cols, n, W, k, 0, 0, prefix, idx, out)
    finally:
        free(prefix)
        free(idx)
    res = np.empty(out.size(), dtype=np.int64)
    cdef int64_t[::1] rv = res
    cdef size_t i
    for i in range(out.size()):
        rv[i] = out[i]
    return res.reshape(-1, k)


def answer_packed(const uint64_t[:, ::1] cols, const int64_t[:, ::1] edges):
    """OR over edges of the AND of their vertices' query bitsets."""
    cdef Py_ssize_t W = cols.shape[1]
    cdef Py_ssize_t m = edges.shape[0]
    cdef Py_ssize_t k = edges.shape[1]
    res = np.zeros(W, dtype=np.uint64)
    cdef uint64_t[::1] out = res
    if W == 0 or m == 0:
        return res
    tmp_arr = np.empty(W, dtype=np.uint64)
    cdef uint64_t[::1] tmp = tmp_arr
    cdef uint64_t* o = &out[0]
    cdef uint64_t* b = &tmp[0]
    cdef const uint64_t* a
    cdef Py_ssize_t e, j, w
    cdef uint64_t full = ~(<uint64_t>0)
    cdef uint64_t sat
    with nogil:
        # edge-major, branch-free inner loops so the compiler can vectorize
        for e in range(m):
            a = &cols[edges[e, 0], 0]
            for w in range(W):
                b[w] = a[w]
            for j in range(1, k):
                a = &cols[edges[e, j], 0]
                for w in range(W):
                    b[w] &= a[w]
            for w in range(W):
                o[w] |= b[w]
            if (e & 63) == 63:
                sat = full
                for w in range(W):
                    sat &= o[w]
                if sat == full:
                    break
    return res


def unique_cover(const uint64_t[:, ::1] cols, const int64_t[:, ::1] edges, Py_ssize_t t):
    """Per query: index of the single edge it contains, -1 if none, -2 if several."""
    cdef Py_ssize_t W = cols.shape[1]
    cdef Py_ssize_t m = edges.shape[0]
    cdef Py_ssize_t k = edges.shape[1]
    owner_arr = np.full(t, -1, dtype=np.int64)
    cdef int64_t[::1] owner = owner_arr
    cdef Py_ssize_t e, j, w, q
    cdef uint64_t acc
    with nogil:
        for e in range(m):
            for w in range(W):
                acc = cols[edges[e, 0], w]
                j = 1
                while j < k and acc:
                    acc &= cols[edges[e, j], w]
                    j += 1
                while acc:
                    q = w * 64 + __builtin_ctzll(acc)
                    acc &= acc - 1
                    if owner[q] == -1:
                        owner[q] = e
                    else:
                        owner[q] = -2
    return owner_arr
