# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) kernels; same signatures as _pykernels."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free, calloc

cnp.import_array()

cdef extern from *:
    """
    static inline unsigned long long mulmod_u64(unsigned long long a,
                                                unsigned long long b,
                                                unsigned long long p) {
        return (unsigned long long)(((unsigned __int128)a * b) % p);
    }
    """
    unsigned long long mulmod_u64(unsigned long long a, unsigned long long b,
                                  unsigned long long p) nogil


# Below 2^26 products fit a double exactly, so a precomputed reciprocal
# replaces the hardware divide.
cdef uint64_t SMALL_P = 1ULL << 26


cdef inline double _pinv(uint64_t p):
    return 1.0 / <double>p if p < SMALL_P else 0.0


cdef inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p, double pinv) nogil:
    cdef uint64_t q
    cdef int64_t r
    if pinv == 0.0:
        return mulmod_u64(a, b, p)
    q = <uint64_t>(<double>a * <double>b * pinv)
    r = <int64_t>(a * b - q * p)
    if r < 0:
        r += p
    elif r >= <int64_t>p:
        r -= p
    return <uint64_t>r


cdef inline uint64_t addmod(uint64_t a, uint64_t b, uint64_t p) nogil:
    cdef uint64_t s = a + b
    if s >= p:
        s -= p
    return s


cdef void _row_coeffs(const int64_t[:, ::1] C, uint64_t x, uint64_t p, double pinv,
                      uint64_t* out) nogil:
    # out[j] = sum_i C[i, j] x^i
    cdef Py_ssize_t nx = C.shape[0], ny = C.shape[1], i, j
    cdef uint64_t acc
    for j in range(ny):
        acc = 0
        for i in range(nx - 1, -1, -1):
            acc = addmod(mulmod(acc, x, p, pinv), <uint64_t>C[i, j], p)
        out[j] = acc


cdef inline uint64_t _horner(uint64_t* r, Py_ssize_t n, uint64_t y, uint64_t p, double pinv) nogil:
    cdef uint64_t acc = 0
    cdef Py_ssize_t j
    for j in range(n - 1, -1, -1):
        acc = addmod(mulmod(acc, y, p, pinv), r[j], p)
    return acc


def poly_table(cnp.ndarray coeffs, cnp.ndarray xs, cnp.ndarray ys, p):
    cdef const int64_t[:, ::1] C = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef const int64_t[::1] X = np.ascontiguousarray(xs, dtype=np.int64)
    cdef const int64_t[::1] Y = np.ascontiguousarray(ys, dtype=np.int64)
    cdef uint64_t P = p
    cdef double pinv = _pinv(P)
    cdef Py_ssize_t na = X.shape[0], nb = Y.shape[0], ny = C.shape[1], a, b
    out = np.empty((na, nb), dtype=np.int64)
    cdef int64_t[:, ::1] O = out
    cdef uint64_t* r = <uint64_t*> malloc(ny * sizeof(uint64_t))
    try:
        with nogil:
            for a in range(na):
                _row_coeffs(C, <uint64_t>X[a], P, pinv, r)
                for b in range(nb):
                    O[a, b] = <int64_t>_horner(r, ny, <uint64_t>Y[b], P, pinv)
    finally:
        free(r)
    return out


def value_counts(cnp.ndarray coeffs, cnp.ndarray xs, cnp.ndarray ys, p):
    cdef const int64_t[:, ::1] C = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef const int64_t[::1] X = np.ascontiguousarray(xs, dtype=np.int64)
    cdef const int64_t[::1] Y = np.ascontiguousarray(ys, dtype=np.int64)
    cdef uint64_t P = p
    cdef double pinv = _pinv(P)
    cdef Py_ssize_t na = X.shape[0], nb = Y.shape[0], ny = C.shape[1], a, b
    counts = np.zeros(p, dtype=np.int64)
    cdef int64_t[::1] K = counts
    cdef uint64_t* r = <uint64_t*> malloc(ny * sizeof(uint64_t))
    try:
        with nogil:
            for a in range(na):
                _row_coeffs(C, <uint64_t>X[a], P, pinv, r)
                for b in range(nb):
                    K[_horner(r, ny, <uint64_t>Y[b], P, pinv)] += 1
    finally:
        free(r)
    return counts


def poly_points(cnp.ndarray coeffs, cnp.ndarray xs, cnp.ndarray ys, p):
    """P(xs[k], ys[k]) for paired coordinate arrays."""
    cdef const int64_t[:, ::1] C = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef const int64_t[::1] X = np.ascontiguousarray(xs, dtype=np.int64)
    cdef const int64_t[::1] Y = np.ascontiguousarray(ys, dtype=np.int64)
    cdef uint64_t P = p
    cdef double pinv = _pinv(P)
    cdef Py_ssize_t n = X.shape[0], ny = C.shape[1], k
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] O = out
    cdef uint64_t* r = <uint64_t*> malloc(ny * sizeof(uint64_t))
    try:
        with nogil:
            for k in range(n):
                _row_coeffs(C, <uint64_t>X[k], P, pinv, r)
                O[k] = <int64_t>_horner(r, ny, <uint64_t>Y[k], P, pinv)
    finally:
        free(r)
    return out


def univariate_values(cnp.ndarray coeffs, cnp.ndarray ts, p):
    cdef const int64_t[::1] C = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef const int64_t[::1] T = np.ascontiguousarray(ts, dtype=np.int64)
    cdef uint64_t P = p, acc
    cdef double pinv = _pinv(P)
    cdef Py_ssize_t n = T.shape[0], deg = C.shape[0], k, j
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] O = out
    with nogil:
        for k in range(n):
            acc = 0
            for j in range(deg - 1, -1, -1):
                acc = addmod(mulmod(acc, <uint64_t>T[k], P, pinv), <uint64_t>C[j], P)
            O[k] = <int64_t>acc
    return out


def quadruple_distinct(cnp.ndarray table, p):
    """Distinct (T[a,c], T[a,d], T[b,c], T[b,d]) over all a, b, c, d."""
    cdef const int64_t[:, ::1] T = np.ascontiguousarray(table, dtype=np.int64)
    cdef Py_ssize_t n = T.shape[0], a, b, c, d
    cdef uint64_t P = p
    cdef uint64_t P2 = P * P, P3 = P2 * P, size = P3 * P, count = 0
    cdef unsigned char* seen = <unsigned char*> calloc(size, 1)
    cdef uint64_t hi
    if seen == NULL:
        raise MemoryError()
    cdef const int64_t* ra
    cdef const int64_t* rb
    cdef uint64_t k
    try:
        with nogil:
            for a in range(n):
                ra = &T[a, 0]
                for b in range(n):
                    rb = &T[b, 0]
                    for c in range(n):
                        hi = <uint64_t>ra[c] * P3 + <uint64_t>rb[c] * P
                        # unconditional stores; counted once below
                        for d in range(n):
                            seen[hi + <uint64_t>ra[d] * P2 + <uint64_t>rb[d]] = 1
            for k in range(size):
                count += seen[k]
    finally:
        free(seen)
    return int(count)
