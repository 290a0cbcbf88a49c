"""Independent references: full unitaries built column by column from each
gate's textbook definition, with no code shared with the simulator."""
import cmath
import math

import numpy as np


def gate_matrix(kind, qubits, m, angle=None):
    dim = 1 << m
    u = np.zeros((dim, dim), dtype=complex)
    bit = lambda b, q: (b >> q) & 1
    for b in range(dim):
        if kind == "h":
            (t,) = qubits
            b0, b1 = b & ~(1 << t), b | (1 << t)
            u[b0, b] += 1 / math.sqrt(2)
            u[b1, b] += (-1 if bit(b, t) else 1) / math.sqrt(2)
        elif kind == "x":
            u[b ^ (1 << qubits[0]), b] = 1
        elif kind == "swap":
            a, c = qubits
            out = b
            if bit(b, a) != bit(b, c):
                out = b ^ (1 << a) ^ (1 << c)
            u[out, b] = 1
        elif kind == "cphase":
            c, t = qubits
            u[b, b] = cmath.exp(1j * angle) if bit(b, c) and bit(b, t) else 1
        elif kind == "toffoli":
            c1, c2, t = qubits
            u[b ^ (1 << t) if bit(b, c1) and bit(b, c2) else b, b] = 1
    return u


def circuit_matrix(circuit):
    m = circuit.qubit_count
    u = np.eye(1 << m, dtype=complex)
    for g in circuit.gates:
        angle = g.angle.sign * 2 * math.pi / 2 ** g.angle.denom_pow if g.angle else None
        u = gate_matrix(g.kind.value, g.qubits, m, angle) @ u
    return u


def dft_matrix(m):
    dim = 1 << m
    a = np.arange(dim)
    return np.exp(2j * math.pi * np.outer(a, a) / dim) / math.sqrt(dim)


def bit_reverse(v, m):
    return int(format(v, f"0{m}b")[::-1], 2)


def random_state(rng, m):
    v = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    return v / np.linalg.norm(v)
