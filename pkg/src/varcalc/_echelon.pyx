# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free row reduction.

Tries a machine-integer pass with overflow detection first; on overflow the
reduction restarts on Python integers from an untouched copy.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

cdef extern from *:
    """
    static inline int vc_mul(long long a, long long b, long long *out) {
        return __builtin_mul_overflow(a, b, out);
    }
    static inline int vc_sub(long long a, long long b, long long *out) {
        return __builtin_sub_overflow(a, b, out);
    }
    """
    int vc_mul(long long a, long long b, long long *out) nogil
    int vc_sub(long long a, long long b, long long *out) nogil


cdef int _reduce_i64(long long *A, Py_ssize_t m, Py_ssize_t n, Py_ssize_t *piv, Py_ssize_t *npiv) nogil:
    # returns 1 on overflow
    cdef long long prev = 1, a, b, x, y
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef long long *prow
    cdef long long *row
    cdef long long tmp
    npiv[0] = 0
    for c in range(n):
        if r == m:
            break
        p = r
        while p < m and A[p * n + c] == 0:
            p += 1
        if p == m:
            continue
        if p != r:
            for j in range(n):
                tmp = A[r * n + j]
                A[r * n + j] = A[p * n + j]
                A[p * n + j] = tmp
        prow = A + r * n
        a = prow[c]
        for i in range(r + 1, m):
            row = A + i * n
            b = row[c]
            if b != 0:
                for j in range(c + 1, n):
                    if vc_mul(a, row[j], &x):
                        return 1
                    if vc_mul(b, prow[j], &y):
                        return 1
                    if vc_sub(x, y, &x):
                        return 1
                    row[j] = x // prev
            elif a != prev:
                for j in range(c + 1, n):
                    if row[j] != 0:
                        if vc_mul(a, row[j], &x):
                            return 1
                        row[j] = x // prev
            row[c] = 0
        prev = a
        piv[npiv[0]] = c
        npiv[0] += 1
        r += 1
    return 0


cdef list _reduce_obj(list rows, Py_ssize_t ncols):
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef object prev = 1, a, b
    cdef list prow, row
    cdef list pivots = []
    for c in range(ncols):
        if r == m:
            break
        p = r
        while p < m and not (<list>rows[p])[c]:
            p += 1
        if p == m:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        prow = <list>rows[r]
        a = prow[c]
        for i in range(r + 1, m):
            row = <list>rows[i]
            b = row[c]
            if b:
                for j in range(c + 1, ncols):
                    row[j] = (a * row[j] - b * prow[j]) // prev
            elif a != prev:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (a * row[j]) // prev
            row[c] = 0
        prev = a
        pivots.append(c)
        r += 1
    return pivots


cdef long long _I64_MAX = 9223372036854775807


def fraction_free_echelon(list rows, Py_ssize_t ncols):
    """Reduce ``rows`` to Bareiss row echelon form in place; return pivot columns."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t i, j, npiv = 0
    cdef long long *A
    cdef Py_ssize_t *piv
    cdef bint fits = True
    cdef int overflow
    cdef object v
    cdef list row
    if m == 0 or ncols == 0:
        return []
    for i in range(m):
        for v in <list>rows[i]:
            if v > _I64_MAX or v < -_I64_MAX:
                fits = False
                break
        if not fits:
            break
    if fits:
        A = <long long *>malloc(m * ncols * sizeof(long long))
        piv = <Py_ssize_t *>malloc(ncols * sizeof(Py_ssize_t))
        if A == NULL or piv == NULL:
            free(A)
            free(piv)
            raise MemoryError()
        try:
            for i in range(m):
                row = <list>rows[i]
                for j in range(ncols):
                    A[i * ncols + j] = row[j]
            with nogil:
                overflow = _reduce_i64(A, m, ncols, piv, &npiv)
            if not overflow:
                for i in range(m):
                    rows[i] = [A[i * ncols + j] for j in range(ncols)]
                return [piv[j] for j in range(npiv)]
        finally:
            free(A)
            free(piv)
    return _reduce_obj(rows, ncols)
