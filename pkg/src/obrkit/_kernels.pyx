# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels.

Hot loops behind the correctors: Hamming argmin over packed braille bit
rows, edit distances, and a bounded OSA scan over same-length word groups.
The numpy/pure-python twins live in ``_pykernels``; behaviour is identical.
"""

from libc.stdlib cimport free, malloc
from libc.stdint cimport int32_t, uint64_t

COMPILED = True

cdef extern from *:
    """
    #if defined(_MSC_VER)
    #include <intrin.h>
    static __inline int obr_popcount64(unsigned long long x) {
        return (int)__popcnt64(x);
    }
    #else
    static inline int obr_popcount64(unsigned long long x) {
        return __builtin_popcountll(x);
    }
    #endif
    """
    int obr_popcount64(unsigned long long x) nogil


def nearest_hamming(const uint64_t[::1] query, const uint64_t[:, ::1] rows):
    """(index, distance) of the row minimising popcount(row ^ query)."""
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t k = rows.shape[1]
    if m == 0:
        raise ValueError("empty candidate matrix")
    if query.shape[0] != k:
        raise ValueError("query width does not match candidate rows")
    cdef Py_ssize_t best = 0, i, j
    cdef int best_d = 2147483647, d
    with nogil:
        for i in range(m):
            d = 0
            for j in range(k):
                d += obr_popcount64(rows[i, j] ^ query[j])
            if d < best_d:
                best_d = d
                best = i
                if d == 0:
                    break
    return best, best_d


cdef int _imin3(int a, int b, int c) nogil:
    if b < a:
        a = b
    if c < a:
        a = c
    return a


def levenshtein(str a, str b):
    """Unit-cost edit distance (insert, delete, substitute)."""
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    cdef int *mem = <int *> malloc((la + lb + 2 * (lb + 1)) * sizeof(int))
    if mem == NULL:
        raise MemoryError()
    cdef int *ca = mem
    cdef int *cb = mem + la
    cdef int *prev = cb + lb
    cdef int *curr = prev + (lb + 1)
    cdef Py_ssize_t i, j
    for i in range(la):
        ca[i] = <int> <Py_UCS4> a[i]
    for j in range(lb):
        cb[j] = <int> <Py_UCS4> b[j]
    cdef int *tmp
    cdef int result
    with nogil:
        for j in range(lb + 1):
            prev[j] = <int> j
        for i in range(1, la + 1):
            curr[0] = <int> i
            for j in range(1, lb + 1):
                curr[j] = _imin3(
                    prev[j] + 1,
                    curr[j - 1] + 1,
                    prev[j - 1] + (ca[i - 1] != cb[j - 1]),
                )
            tmp = prev
            prev = curr
            curr = tmp
        result = prev[lb]
    free(mem)
    return result


cdef int _osa_row_scan(const int32_t *qa, Py_ssize_t la, const int32_t *wb,
                       Py_ssize_t lb, int limit, int *prev2, int *prev,
                       int *curr) nogil:
    """OSA distance capped at limit + 1, using caller-provided row buffers."""
    cdef Py_ssize_t i, j
    cdef int d, rmin, prev_rmin
    cdef int big = limit + 1
    cdef int *tmp
    if la - lb > limit or lb - la > limit:
        return big
    for j in range(lb + 1):
        prev[j] = <int> j
    prev_rmin = 0
    for i in range(1, la + 1):
        curr[0] = <int> i
        rmin = curr[0]
        for j in range(1, lb + 1):
            d = _imin3(
                prev[j] + 1,
                curr[j - 1] + 1,
                prev[j - 1] + (qa[i - 1] != wb[j - 1]),
            )
            if i > 1 and j > 1 and qa[i - 1] == wb[j - 2] and qa[i - 2] == wb[j - 1]:
                if prev2[j - 2] + 1 < d:
                    d = prev2[j - 2] + 1
            curr[j] = d
            if d < rmin:
                rmin = d
        if rmin > limit and prev_rmin > limit:
            return big
        prev_rmin = rmin
        tmp = prev2
        prev2 = prev
        prev = curr
        curr = tmp
    d = prev[lb]
    if d > limit:
        return big
    return d


def osa_limited(str a, str b, int limit):
    """OSA edit distance (with adjacent transposition), capped at limit + 1."""
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return min(la + lb, <Py_ssize_t> limit + 1)
    cdef int *mem = <int *> malloc((la + lb + 3 * (lb + 1)) * sizeof(int))
    if mem == NULL:
        raise MemoryError()
    cdef int32_t *ca = <int32_t *> mem
    cdef int32_t *cb = <int32_t *> (mem + la)
    cdef int *rows = mem + la + lb
    cdef Py_ssize_t i
    for i in range(la):
        ca[i] = <int32_t> <Py_UCS4> a[i]
    for i in range(lb):
        cb[i] = <int32_t> <Py_UCS4> b[i]
    cdef int result
    with nogil:
        result = _osa_row_scan(ca, la, cb, lb, limit,
                               rows, rows + (lb + 1), rows + 2 * (lb + 1))
    free(mem)
    return result


def osa_scan(str query, const int32_t[:, ::1] rows, int limit):
    """All (index, distance) pairs with OSA(query, rows[i]) <= limit.

    ``rows`` holds codepoints of same-length words, one word per row.
    """
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t lb = rows.shape[1]
    cdef Py_ssize_t la = len(query)
    hits = []
    if m == 0 or la - lb > limit or lb - la > limit:
        return hits
    cdef int *mem = <int *> malloc((la + 3 * (lb + 1) + 2 * m) * sizeof(int))
    if mem == NULL:
        raise MemoryError()
    cdef int32_t *qa = <int32_t *> mem
    cdef int *bufs = mem + la
    cdef int *hit_idx = mem + la + 3 * (lb + 1)
    cdef int *hit_d = hit_idx + m
    cdef Py_ssize_t i
    for i in range(la):
        qa[i] = <int32_t> <Py_UCS4> query[i]
    cdef Py_ssize_t n_hits = 0
    cdef int d
    with nogil:
        for i in range(m):
            d = _osa_row_scan(qa, la, &rows[i, 0], lb, limit,
                              bufs, bufs + (lb + 1), bufs + 2 * (lb + 1))
            if d <= limit:
                hit_idx[n_hits] = <int> i
                hit_d[n_hits] = d
                n_hits += 1
    for i in range(n_hits):
        hits.append((hit_idx[i], hit_d[i]))
    free(mem)
    return hits
