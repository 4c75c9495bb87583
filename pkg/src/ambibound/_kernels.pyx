# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: grid log-sum-exp and homomorphism backtracking.

Both functions mirror the signatures in ``_purepy`` exactly; see that module
for the contracts.
"""

import numpy as np

from libc.math cimport exp, log, INFINITY

ctypedef long long i64
ctypedef unsigned long long u64

cdef enum:
    MAX_QUERY = 8
    MAX_PARENTS = 64


def lse_grid(const double[::1] logc, const double[::1] x, const double[::1] y,
             const double[::1] a, const double[::1] b):
    cdef Py_ssize_t K = logc.shape[0]
    cdef Py_ssize_t G = a.shape[0]
    cdef Py_ssize_t g, k
    cdef double m, t, s, ag, bg
    if x.shape[0] != K or y.shape[0] != K or b.shape[0] != G:
        raise ValueError("shape mismatch")
    if K == 0:
        raise ValueError("empty histogram")
    out = np.empty(G, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for g in range(G):
            ag = a[g]
            bg = b[g]
            m = -INFINITY
            for k in range(K):
                t = logc[k] + ag * x[k] + bg * y[k]
                if t > m:
                    m = t
            s = 0.0
            for k in range(K):
                s += exp(logc[k] + ag * x[k] + bg * y[k] - m)
            o[g] = m + log(s)
    return out


cdef struct Plan:
    int n
    const i64* indptr
    const i64* indices
    i64 pptr[MAX_QUERY + 1]
    i64 pidx[MAX_PARENTS]
    i64 img[MAX_QUERY]
    u64 lo
    u64 hi


cdef inline void _add(Plan* P, u64 v) noexcept nogil:
    P.lo += v
    if P.lo < v:
        P.hi += 1


cdef inline bint _has_edge(Plan* P, i64 u, i64 v) noexcept nogil:
    cdef i64 lo = P.indptr[u]
    cdef i64 hi = P.indptr[u + 1]
    cdef i64 mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if P.indices[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo < P.indptr[u + 1] and P.indices[lo] == v


cdef void _extend(Plan* P, int k) noexcept nogil:
    cdef i64 start = P.pptr[k]
    cdef i64 stop = P.pptr[k + 1]
    cdef i64 j, e, c, u, w, d, best_deg
    cdef i64 best = start
    cdef bint last = k == P.n - 1
    cdef bint ok
    cdef u64 cnt = 0

    u = P.img[P.pidx[start]]
    best_deg = P.indptr[u + 1] - P.indptr[u]
    for j in range(start + 1, stop):
        w = P.img[P.pidx[j]]
        d = P.indptr[w + 1] - P.indptr[w]
        if d < best_deg:
            best_deg = d
            best = j
    u = P.img[P.pidx[best]]

    if last and stop - start == 1:
        _add(P, <u64>best_deg)
        return

    for e in range(P.indptr[u], P.indptr[u + 1]):
        c = P.indices[e]
        ok = True
        for j in range(start, stop):
            if j != best and not _has_edge(P, P.img[P.pidx[j]], c):
                ok = False
                break
        if not ok:
            continue
        if last:
            cnt += 1
        else:
            P.img[k] = c
            _extend(P, k + 1)
    if last:
        _add(P, cnt)


def hom_count(const i64[::1] indptr, const i64[::1] indices,
              const i64[::1] parent_ptr, const i64[::1] parent_idx,
              const i64[::1] roots):
    cdef Plan P
    cdef Py_ssize_t i, r
    cdef int n = <int>(parent_ptr.shape[0] - 1)
    if n < 1 or n > MAX_QUERY:
        raise ValueError(f"query size {n} outside [1, {MAX_QUERY}]")
    if parent_idx.shape[0] > MAX_PARENTS:
        raise ValueError("too many parent links")
    if n == 1:
        return int(roots.shape[0])
    for i in range(1, n):
        if parent_ptr[i + 1] <= parent_ptr[i]:
            raise ValueError(f"query position {i} has no earlier neighbour")
    if indices.shape[0] == 0:
        return 0

    P.n = n
    P.indptr = &indptr[0]
    P.indices = &indices[0]
    for i in range(n + 1):
        P.pptr[i] = parent_ptr[i]
    for i in range(parent_idx.shape[0]):
        P.pidx[i] = parent_idx[i]
    P.lo = 0
    P.hi = 0
    with nogil:
        for r in range(roots.shape[0]):
            P.img[0] = roots[r]
            _extend(&P, 1)
    return (int(P.hi) << 64) | int(P.lo)


def _accumulate_u128(values):
    """Sum 64-bit values with the counter used by ``hom_count`` (test hook)."""
    cdef Plan P
    P.lo = 0
    P.hi = 0
    for v in values:
        _add(&P, <u64>v)
    return (int(P.hi) << 64) | int(P.lo)
