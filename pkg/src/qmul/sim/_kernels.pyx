# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled in-place gate kernels over a little-endian amplitude array.

Each kernel enumerates only the amplitudes the gate touches by inserting
zero bits at the gate's qubit positions into a compact counter.
"""
from libc.math cimport sqrt

ctypedef double complex cplx


cdef inline Py_ssize_t _ins(Py_ssize_t i, int bit) noexcept nogil:
    # insert a 0 bit at position `bit`
    return ((i >> bit) << (bit + 1)) | (i & ((<Py_ssize_t>1 << bit) - 1))


cdef inline void _h_pair(double *d, Py_ssize_t i0, Py_ssize_t i1, double r) noexcept nogil:
    cdef double ar = d[i0], ai = d[i0 + 1], br = d[i1], bi = d[i1 + 1]
    d[i0] = (ar + br) * r
    d[i0 + 1] = (ai + bi) * r
    d[i1] = (ar - br) * r
    d[i1 + 1] = (ai - bi) * r


def h(cplx[::1] s, int q):
    cdef Py_ssize_t n = s.shape[0], blk, base, j
    cdef Py_ssize_t step = <Py_ssize_t>1 << q
    cdef Py_ssize_t blocks = n >> (q + 1)
    cdef double r = 1.0 / sqrt(2.0)
    cdef double *d = <double *>&s[0]
    with nogil:
        if step >= 8:
            for blk in range(blocks):
                base = blk << (q + 1)
                for j in range(base, base + step):
                    _h_pair(d, 2 * j, 2 * (j + step), r)
        else:
            for j in range(n >> 1):
                base = _ins(j, q)
                _h_pair(d, 2 * base, 2 * (base + step), r)


def x(cplx[::1] s, int q):
    cdef Py_ssize_t half = s.shape[0] >> 1, k, i0, i1
    cdef Py_ssize_t step = <Py_ssize_t>1 << q
    cdef cplx a
    with nogil:
        for k in range(half):
            i0 = _ins(k, q)
            i1 = i0 | step
            a = s[i0]
            s[i0] = s[i1]
            s[i1] = a


def phase(cplx[::1] s, int q, cplx f):
    cdef Py_ssize_t half = s.shape[0] >> 1, k, i
    cdef Py_ssize_t step = <Py_ssize_t>1 << q
    with nogil:
        for k in range(half):
            i = _ins(k, q) | step
            s[i] = s[i] * f


def cphase(cplx[::1] s, int a, int b, cplx f):
    cdef int lo = a if a < b else b
    cdef int hi = b if a < b else a
    cdef Py_ssize_t quarter = s.shape[0] >> 2, k, i
    cdef Py_ssize_t mask = (<Py_ssize_t>1 << a) | (<Py_ssize_t>1 << b)
    with nogil:
        for k in range(quarter):
            i = _ins(_ins(k, lo), hi) | mask
            s[i] = s[i] * f


def swap(cplx[::1] s, int a, int b):
    cdef int lo = a if a < b else b
    cdef int hi = b if a < b else a
    cdef Py_ssize_t quarter = s.shape[0] >> 2, k, base, i01, i10
    cdef Py_ssize_t ma = <Py_ssize_t>1 << a, mb = <Py_ssize_t>1 << b
    cdef cplx t
    with nogil:
        for k in range(quarter):
            base = _ins(_ins(k, lo), hi)
            i01 = base | mb
            i10 = base | ma
            t = s[i01]
            s[i01] = s[i10]
            s[i10] = t


def toffoli(cplx[::1] s, int c1, int c2, int t):
    cdef int p0 = c1, p1 = c2, p2 = t, tmp
    # sort the three positions ascending for zero-bit insertion
    if p0 > p1:
        tmp = p0; p0 = p1; p1 = tmp
    if p1 > p2:
        tmp = p1; p1 = p2; p2 = tmp
    if p0 > p1:
        tmp = p0; p0 = p1; p1 = tmp
    cdef Py_ssize_t eighth = s.shape[0] >> 3, k, i0, i1
    cdef Py_ssize_t cmask = (<Py_ssize_t>1 << c1) | (<Py_ssize_t>1 << c2)
    cdef Py_ssize_t tbit = <Py_ssize_t>1 << t
    cdef cplx a
    with nogil:
        for k in range(eighth):
            i0 = _ins(_ins(_ins(k, p0), p1), p2) | cmask
            i1 = i0 | tbit
            a = s[i0]
            s[i0] = s[i1]
            s[i1] = a


def diagonal(cplx[::1] s, long[::1] qubits, cplx[::1] table):
    """Multiply amplitude i by table[j], j = bits of i at `qubits` packed little-endian."""
    cdef Py_ssize_t n = s.shape[0], i, j
    cdef int k, nq = qubits.shape[0]
    cdef int qs[64]
    for k in range(nq):
        qs[k] = qubits[k]
    with nogil:
        for i in range(n):
            j = 0
            for k in range(nq):
                j |= ((i >> qs[k]) & 1) << k
            s[i] = s[i] * table[j]
