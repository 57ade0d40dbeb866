# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free elimination kernels.

Same contract as ``apw._kernel_py``. Each call first runs on a C ``int64``
copy of the matrix (128-bit intermediates, overflow-checked results); on the first overflow it
discards that work and redoes the elimination on big integers (gmpy2
``mpz`` with exact division when available, Python ``int`` otherwise).
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

BACKEND = "cython"

try:
    from gmpy2 import mpz as _big, divexact as _divexact
except ImportError:  # plain Python integers
    _big = int

    def _divexact(a, b):
        return a // b


cdef extern from *:
    """
    /* (p*x - f*y) / q with a 128-bit intermediate; returns 1 if the exact
       quotient does not fit in 64 bits. */
    static inline int apw_step(long long p, long long x, long long f, long long y,
                               long long q, long long *out) {
        __int128 t = (__int128)p * x - (__int128)f * y;
        t /= q;
        if (t > (__int128)0x3fffffffffffffffLL || t < -(__int128)0x3fffffffffffffffLL)
            return 1;
        *out = (long long)t;
        return 0;
    }
    """
    int apw_step(long long p, long long x, long long f, long long y,
                 long long q, long long *out) nogil


cdef int64_t* _to_c(list rows, Py_ssize_t m, Py_ssize_t n) except? NULL:
    cdef int64_t* buf = <int64_t*> malloc(max(m * n, 1) * sizeof(int64_t))
    cdef Py_ssize_t i, j
    cdef object v
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            row = rows[i]
            for j in range(n):
                v = row[j]
                if v > 4611686018427387903 or v < -4611686018427387903:
                    free(buf)
                    return NULL
                buf[i * n + j] = v
    except BaseException:
        free(buf)
        raise
    return buf


cdef int _elim_c(int64_t* a, Py_ssize_t m, Py_ssize_t n, bint jordan,
                 Py_ssize_t* pivots, Py_ssize_t* rank_out) nogil:
    """Returns 0 on success, 1 on overflow."""
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef long long prev = 1, piv, f, best_abs, aa, t1
    cdef int64_t tmp
    cdef Py_ssize_t start
    for c in range(n):
        if r == m:
            break
        p = -1
        best_abs = 0
        for i in range(r, m):
            aa = a[i * n + c]
            if aa < 0:
                aa = -aa
            if aa > best_abs:
                best_abs = aa
                p = i
        if p < 0:
            continue
        if p != r:
            for j in range(n):
                tmp = a[r * n + j]
                a[r * n + j] = a[p * n + j]
                a[p * n + j] = tmp
        piv = a[r * n + c]
        start = 0 if jordan else r + 1
        for i in range(start, m):
            if i == r:
                continue
            f = a[i * n + c]
            # rows below the pivot are already zero left of column c
            for j in range(0 if i < r else c, n):
                if apw_step(piv, a[i * n + j], f, a[r * n + j], prev, &t1):
                    return 1
                a[i * n + j] = t1
        prev = piv
        pivots[r] = c
        r += 1
    rank_out[0] = r
    return 0


cdef tuple _elim_obj(list rows, Py_ssize_t ncols, bint jordan):
    cdef Py_ssize_t m = len(rows), r = 0, c, i, p
    cdef object prev = _big(1), piv, f, a, best_abs, dx = _divexact
    cdef list prow, row, tail, pivots = []
    rows = [[_big(x) for x in rw] for rw in rows]
    for c in range(ncols):
        if r == m:
            break
        p = -1
        best_abs = 0
        for i in range(r, m):
            a = (<list> rows[i])[c]
            if a:
                a = abs(a)
                if a > best_abs:
                    best_abs = a
                    p = i
        if p < 0:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        piv = prow[c]
        tail = prow[c:]
        for i in range(0 if jordan else r + 1, m):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if i > r:
                if f:
                    rows[i] = row[:c] + [dx(piv * x - f * y, prev) for x, y in zip(row[c:], tail)]
                else:
                    rows[i] = row[:c] + [dx(piv * x, prev) for x in row[c:]]
            elif f:
                rows[i] = [dx(piv * x - f * y, prev) for x, y in zip(row, prow)]
            else:
                rows[i] = [dx(piv * x, prev) for x in row]
        prev = piv
        pivots.append(c)
        r += 1
    return [[int(x) for x in rw] for rw in rows[:r]], pivots


cdef tuple _run(list rows, Py_ssize_t ncols, bint jordan):
    cdef Py_ssize_t m = len(rows), i, j, k, rank = 0
    cdef int64_t* buf
    cdef Py_ssize_t* piv
    cdef int status
    if m == 0 or ncols == 0:
        return [], []
    buf = _to_c(rows, m, ncols)
    if buf == NULL:
        return _elim_obj(rows, ncols, jordan)
    piv = <Py_ssize_t*> malloc(m * sizeof(Py_ssize_t))
    if piv == NULL:
        free(buf)
        raise MemoryError()
    try:
        with nogil:
            status = _elim_c(buf, m, ncols, jordan, piv, &rank)
        if status:
            return _elim_obj(rows, ncols, jordan)
        out = []
        for i in range(rank):
            out.append([buf[i * ncols + j] for j in range(ncols)])
        return out, [piv[k] for k in range(rank)]
    finally:
        free(buf)
        free(piv)


def rank_int(list rows, Py_ssize_t ncols):
    """Rank of an integer matrix by one-sided Bareiss elimination."""
    return len(_run(rows, ncols, False)[1])


def rref_int(list rows, Py_ssize_t ncols):
    """Fraction-free Gauss-Jordan elimination; see ``apw._kernel_py.rref_int``."""
    return _run(rows, ncols, True)
