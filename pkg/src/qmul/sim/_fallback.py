"""Pure-numpy gate kernels, used when the compiled extension is absent.

Same signatures and in-place semantics as the Cython module. A gate on
bits ``b1 < b2 < ...`` reshapes the flat array into a strided view with one
length-2 axis per bit, so every update is a slice assignment.
"""
import math

import numpy as np

_R = 1.0 / math.sqrt(2.0)


def _view(s, bits):
    """View of ``s`` with a length-2 axis per bit, plus the axis of each bit."""
    bits = sorted(bits)
    shape = []
    prev = s.shape[0].bit_length() - 1
    for b in reversed(bits):
        shape += [1 << (prev - b - 1), 2]
        prev = b
    shape.append(1 << prev)
    v = s.reshape(shape)
    axis = {b: 2 * i + 1 for i, b in enumerate(reversed(bits))}
    return v, axis


def _idx(ndim, fixed):
    ix = [slice(None)] * ndim
    for ax, val in fixed.items():
        ix[ax] = val
    return tuple(ix)


def h(s, q):
    v, ax = _view(s, [q])
    i0, i1 = _idx(v.ndim, {ax[q]: 0}), _idx(v.ndim, {ax[q]: 1})
    a = v[i0].copy()
    b = v[i1]
    v[i0] = (a + b) * _R
    v[i1] = (a - b) * _R


def x(s, q):
    v, ax = _view(s, [q])
    i0, i1 = _idx(v.ndim, {ax[q]: 0}), _idx(v.ndim, {ax[q]: 1})
    a = v[i0].copy()
    v[i0] = v[i1]
    v[i1] = a


def phase(s, q, f):
    v, ax = _view(s, [q])
    v[_idx(v.ndim, {ax[q]: 1})] *= f


def cphase(s, a, b, f):
    v, ax = _view(s, [a, b])
    v[_idx(v.ndim, {ax[a]: 1, ax[b]: 1})] *= f


def swap(s, a, b):
    v, ax = _view(s, [a, b])
    i01 = _idx(v.ndim, {ax[a]: 0, ax[b]: 1})
    i10 = _idx(v.ndim, {ax[a]: 1, ax[b]: 0})
    t = v[i01].copy()
    v[i01] = v[i10]
    v[i10] = t


def toffoli(s, c1, c2, t):
    v, ax = _view(s, [c1, c2, t])
    i0 = _idx(v.ndim, {ax[c1]: 1, ax[c2]: 1, ax[t]: 0})
    i1 = _idx(v.ndim, {ax[c1]: 1, ax[c2]: 1, ax[t]: 1})
    a = v[i0].copy()
    v[i0] = v[i1]
    v[i1] = a


def diagonal(s, qubits, table):
    idx = np.arange(s.shape[0])
    j = np.zeros_like(idx)
    for k, q in enumerate(qubits):
        j |= ((idx >> q) & 1) << k
    s *= table[j]
