# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free elimination kernel.

Runs the same elimination as :mod:`hocat._pykernel` on 64-bit integers with
overflow-checked arithmetic.  If any intermediate value leaves the 64-bit range
the input is handed to the pure-Python kernel unchanged, so both kernels
return identical integers on every input.
"""

from libc.stdlib cimport free, malloc

from . import _pykernel


cdef extern from *:
    bint __builtin_mul_overflow(long long a, long long b, long long *res) nogil
    bint __builtin_sub_overflow(long long a, long long b, long long *res) nogil


cdef int _eliminate(long long *m, Py_ssize_t nrows, Py_ssize_t ncols, Py_ssize_t *pivots,
                    Py_ssize_t *npiv, long long *det) noexcept nogil:
    """Returns 1 on overflow, 0 on success."""
    cdef long long prev = 1, piv, a, x, y
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef long long tmp
    npiv[0] = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p * ncols + c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            for j in range(ncols):
                tmp = m[p * ncols + j]
                m[p * ncols + j] = m[r * ncols + j]
                m[r * ncols + j] = tmp
        piv = m[r * ncols + c]
        for i in range(nrows):
            if i == r:
                continue
            a = m[i * ncols + c]
            if a == 0:
                if piv != prev:
                    for j in range(ncols):
                        if m[i * ncols + j]:
                            if __builtin_mul_overflow(piv, m[i * ncols + j], &x):
                                return 1
                            m[i * ncols + j] = x // prev
                continue
            for j in range(ncols):
                if __builtin_mul_overflow(piv, m[i * ncols + j], &x):
                    return 1
                if __builtin_mul_overflow(a, m[r * ncols + j], &y):
                    return 1
                if __builtin_sub_overflow(x, y, &x):
                    return 1
                m[i * ncols + j] = x // prev
        pivots[npiv[0]] = c
        npiv[0] += 1
        prev = piv
        r += 1
    det[0] = prev
    return 0


def ff_gauss_jordan(rows, Py_ssize_t ncols):
    """Fraction-free Gauss-Jordan elimination on integer rows, in place.

    Same contract as :func:`hocat._pykernel.ff_gauss_jordan`.
    """
    cdef Py_ssize_t nrows = len(rows), i, j, npiv = 0
    cdef long long det = 1
    cdef long long *m
    cdef Py_ssize_t *pivots
    cdef int overflow
    if nrows == 0 or ncols == 0:
        return [], 1
    m = <long long *> malloc(nrows * ncols * sizeof(long long))
    pivots = <Py_ssize_t *> malloc(ncols * sizeof(Py_ssize_t))
    if m == NULL or pivots == NULL:
        free(m)
        free(pivots)
        raise MemoryError()
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                value = row[j]
                if not -(1 << 62) < value < (1 << 62):
                    return _pykernel.ff_gauss_jordan(rows, ncols)
                m[i * ncols + j] = value
        with nogil:
            overflow = _eliminate(m, nrows, ncols, pivots, &npiv, &det)
        if overflow:
            return _pykernel.ff_gauss_jordan(rows, ncols)
        for i in range(nrows):
            rows[i] = [m[i * ncols + j] for j in range(ncols)]
        return [pivots[j] for j in range(npiv)], det
    finally:
        free(m)
        free(pivots)
