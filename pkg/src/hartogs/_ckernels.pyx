# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_pykernels``."""
import numpy as np

from libc.math cimport M_PI, NAN, pow as cpow, sqrt
from libc.stdlib cimport malloc, free

NAME = "cython"

cdef extern from "complex.h" nogil:
    double complex conj(double complex)


cdef inline double complex ipow(double complex x, int k) noexcept nogil:
    cdef double complex out = 1.0
    cdef int i
    for i in range(k):
        out = out * x
    return out


def hartogs_kernel(P, Q, int n, int k, bint ball):
    cdef const double complex[:, ::1] p = np.ascontiguousarray(P, dtype=complex)
    cdef const double complex[:, ::1] q = np.ascontiguousarray(Q, dtype=complex)
    cdef Py_ssize_t m = q.shape[0]
    cdef Py_ssize_t single = p.shape[0] == 1
    out_arr = np.empty(m, dtype=complex)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, ip, j
    cdef int fact = 1
    cdef int poles = 0
    cdef double scale
    cdef double complex eta, etak, om, gap, num, den, nusum
    cdef bint zero
    for j in range(2, n + 1):
        fact *= j
    scale = cpow(M_PI, n + 1)
    with nogil:
        for i in range(m):
            ip = 0 if single else i
            eta = p[ip, 0] * conj(q[i, 0])
            etak = ipow(eta, k)
            om = 1.0 - eta
            zero = om == 0
            if ball:
                nusum = 0
                for j in range(1, n + 1):
                    nusum = nusum + p[ip, j] * conj(q[i, j])
                gap = etak - nusum
                zero = zero or gap == 0
                num = fact * etak
                den = om * om * ipow(gap, n + 1)
            else:
                num = ipow(etak, n)
                den = om * om
                for j in range(1, n + 1):
                    gap = etak - p[ip, j] * conj(q[i, j])
                    zero = zero or gap == 0
                    den = den * gap * gap
            if zero:
                poles += 1
                out[i] = NAN
            else:
                out[i] = num / (den * scale)
    return out_arr, poles


def shell_sum(double complex eta, t, s, beta, weights):
    cdef const double complex[::1] tv = np.ascontiguousarray(t, dtype=complex)
    cdef const long long[::1] sv = np.ascontiguousarray(s, dtype=np.int64)
    cdef const long long[:, ::1] bv = np.ascontiguousarray(beta, dtype=np.int64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=float)
    cdef Py_ssize_t m = sv.shape[0]
    cdef Py_ssize_t n = tv.shape[0]
    cdef Py_ssize_t i, j, d
    cdef long long top = 0
    for i in range(m):
        if sv[i] > top:
            top = sv[i]
        for j in range(n):
            if bv[i, j] > top:
                top = bv[i, j]
    cdef Py_ssize_t width = top + 1
    # row 0 holds powers of eta, rows 1..n powers of t_j
    cdef double complex* table = <double complex*> malloc((n + 1) * width * sizeof(double complex))
    if table == NULL:
        raise MemoryError()
    cdef double complex total = 0, term
    cdef double abs_total = 0
    try:
        with nogil:
            for j in range(n + 1):
                table[j * width] = 1.0
                for d in range(1, width):
                    table[j * width + d] = table[j * width + d - 1] * (eta if j == 0 else tv[j - 1])
            for i in range(m):
                term = wv[i] * table[sv[i]]
                for j in range(n):
                    term = term * table[(j + 1) * width + bv[i, j]]
                total = total + term
                abs_total = abs_total + sqrt(term.real * term.real + term.imag * term.imag)
    finally:
        free(table)
    return complex(total), abs_total
