"""Simulation of circuits on basis-state inputs where most qubits stay classical.

A prefix of reversible classical gates (X, Toffoli, Swap) is evaluated on an
integer bit string. After that only the ``quantum`` qubits are simulated;
every gate touching a classical qubit is resolved: a controlled phase whose
classical side is 0 is dropped, and one whose classical side is 1 becomes an
unconditional phase on the quantum side.

Two engines evolve the quantum part:

``dense``
    a ``StateVector`` over the quantum qubits only.
``factored``
    a product of single-qubit states. A controlled phase between two
    superposed qubits is handled by measuring a qubit that no later gate
    will change (diagonal gates commute with that measurement), which turns
    the inverse QFT into its semi-classical form. Readout is a best-first
    search over measurement branches, so the returned value is the exact
    argmax of the readout distribution.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, DyadicAngle, Gate, GateKind
from .errors import DomainError, StructuralError
from . import sim

# largest quantum register handed to the dense engine under engine="auto"
DENSE_ENGINE_MAX = 12
MAX_BRANCH_NODES = 200_000

_R = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class HybridResult:
    value: int
    probability: float
    engine: str


def classical_step(bits: int, g: Gate) -> int:
    q = g.qubits
    if g.kind is GateKind.X:
        return bits ^ (1 << q[0])
    if g.kind is GateKind.TOFFOLI:
        if (bits >> q[0]) & 1 and (bits >> q[1]) & 1:
            return bits ^ (1 << q[2])
        return bits
    if g.kind is GateKind.SWAP:
        a, b = (bits >> q[0]) & 1, (bits >> q[1]) & 1
        return bits if a == b else bits ^ (1 << q[0]) ^ (1 << q[1])
    if g.kind is GateKind.CPHASE:
        return bits  # global phase on a basis state
    raise StructuralError(f"{g.kind.value} is not a classical gate")


def resolve(gates: Sequence[Gate], bits: int, local: dict[int, int]):
    """Yield quantum-only operations on local indices.

    Operations are tuples: ``("h", i)``, ``("x", i)``, ``("swap", i, j)``,
    ``("cphase", i, j, angle)``, ``("phase", i, angle)``,
    ``("toffoli", i, j, k)``.
    """
    for g in gates:
        q = g.qubits
        inside = [p in local for p in q]
        if not any(inside):
            bits = classical_step(bits, g)
            continue
        kind = g.kind
        if all(inside):
            yield (kind.value, *(local[p] for p in q), *((g.angle,) if g.angle else ()))
        elif kind is GateKind.CPHASE:
            cl, qu = (q[0], q[1]) if inside[1] else (q[1], q[0])
            if (bits >> cl) & 1:
                yield ("phase", local[qu], g.angle)
        elif kind is GateKind.TOFFOLI and not inside[0] and not inside[1]:
            if (bits >> q[0]) & 1 and (bits >> q[1]) & 1:
                yield ("x", local[q[2]])
        else:
            raise StructuralError(
                f"{kind.value} on {q} mixes classical and simulated qubits in an unsupported way"
            )


def simulate(circuit: Circuit, basis_value: int, quantum: Sequence[int], readout: Sequence[int],
             classical_prefix: int = 0, engine: str = "auto") -> HybridResult:
    """Most probable value of ``readout`` after running ``circuit`` on ``|basis_value>``."""
    bits = basis_value
    for g in circuit.gates[:classical_prefix]:
        bits = classical_step(bits, g)
    quantum = tuple(quantum)
    local = {q: i for i, q in enumerate(quantum)}
    if not set(readout) <= set(local):
        raise StructuralError("readout qubits must be simulated qubits")
    ops = list(resolve(circuit.gates[classical_prefix:], bits, local))
    init = sum(((bits >> q) & 1) << i for i, q in enumerate(quantum))
    targets = [local[q] for q in readout]
    if engine == "auto":
        engine = "dense" if len(quantum) <= DENSE_ENGINE_MAX else "factored"
    if engine == "dense":
        value, prob = _run_dense(ops, len(quantum), init, targets)
    elif engine == "factored":
        value, prob = _run_factored(ops, len(quantum), init, targets)
    else:
        raise DomainError(f"unknown hybrid engine {engine!r}")
    return HybridResult(value, prob, engine)


def _run_dense(ops, m, init, targets):
    state = sim.init_basis(m, init)
    for op in ops:
        kind = op[0]
        if kind == "phase":
            sim.apply_phase(state, op[1], op[2])
        elif kind == "cphase":
            sim.apply(state, Gate(GateKind.CPHASE, op[1:3], op[3]))
        else:
            sim.apply(state, Gate(GateKind(kind), op[1:]))
    r = sim.readout(state, targets)
    return r.value, r.probability


# -- factored engine -------------------------------------------------------
#
# A qubit is either an int (0 or 1, a basis state) or a pair (a0, a1) of
# amplitudes. The whole register is the tensor product of its qubits.


def _changing(op) -> tuple[int, ...]:
    """Local qubits whose Z-basis value the operation can change."""
    kind = op[0]
    if kind in ("h", "x"):
        return (op[1],)
    if kind == "swap":
        return op[1:3]
    if kind == "toffoli":
        return (op[3],)
    return ()


def _phase_of(angle: DyadicAngle, cache={}) -> complex:
    f = cache.get(angle)
    if f is None:
        f = cache[angle] = angle.phase()
    return f


def _run_factored(ops, m, init, targets):
    last_change = [-1] * m
    for pos, op in enumerate(ops):
        for q in _changing(op):
            last_change[q] = pos
    readable = set(targets)
    root = [(init >> i) & 1 for i in range(m)]
    # entries: (-probability, seq, done, pos, qubits, probability)
    heap = [(-1.0, 0, False, 0, root, 1.0)]
    seq = 1
    leaves = []
    best = None
    while heap:
        negp, _, done, pos, qubits, p = heapq.heappop(heap)
        if best is not None and -negp < best - sim.statevector.TIE_TOLERANCE:
            break
        if done:
            leaves.append((p, pos))  # pos holds the value for finished leaves
            best = p if best is None else max(best, p)
            continue
        if seq > MAX_BRANCH_NODES:
            raise StructuralError("factored simulation branched too widely; use the dense engine")
        children = _advance(ops, pos, qubits, p, last_change, readable)
        if isinstance(children, tuple):  # finished: (value, probability)
            value, prob = _leaf(qubits, targets, p)
            heapq.heappush(heap, (-prob, seq, True, value, None, prob))
            seq += 1
            continue
        for child_pos, child_qubits, child_p in children:
            heapq.heappush(heap, (-child_p, seq, False, child_pos, child_qubits, child_p))
            seq += 1
    top = max(p for p, _ in leaves)
    value = min(v for p, v in leaves if p >= top - sim.statevector.TIE_TOLERANCE)
    prob = max(p for p, v in leaves if v == value)
    return value, prob


def _measure(qubits, q, pos, p):
    a0, a1 = qubits[q]
    out = []
    for bit, amp in ((0, a0), (1, a1)):
        w = abs(amp) ** 2
        if w > 0.0:
            child = list(qubits)
            child[q] = bit
            out.append((pos, child, p * w))
    return out


def _advance(ops, pos, qubits, p, last_change, readable):
    """Run ops from ``pos`` in place until a branch point.

    Returns a list of child nodes at a branch, or ``(None, None)`` once all
    operations are applied.
    """
    n_ops = len(ops)
    while pos < n_ops:
        op = ops[pos]
        kind = op[0]
        if kind == "cphase" or kind == "toffoli":
            pairs = [q for q in op[1:3] if not isinstance(qubits[q], int)]
            if kind == "toffoli":
                if pairs:
                    return _branch(qubits, pairs, pos, p, last_change, readable)
                if qubits[op[1]] and qubits[op[2]]:
                    _flip(qubits, op[3])
            elif len(pairs) == 2:
                return _branch(qubits, pairs, pos, p, last_change, readable)
            else:
                a, b = op[1], op[2]
                if isinstance(qubits[a], int):
                    a, b = b, a
                # b is classical now
                if qubits[b]:
                    _phase(qubits, a, _phase_of(op[3]))
        elif kind == "phase":
            _phase(qubits, op[1], _phase_of(op[2]))
        elif kind == "h":
            q = op[1]
            v = qubits[q]
            if isinstance(v, int):
                qubits[q] = (_R, -_R if v else _R)
            else:
                qubits[q] = ((v[0] + v[1]) * _R, (v[0] - v[1]) * _R)
        elif kind == "x":
            _flip(qubits, op[1])
        elif kind == "swap":
            i, j = op[1], op[2]
            qubits[i], qubits[j] = qubits[j], qubits[i]
        else:  # pragma: no cover
            raise StructuralError(f"unknown operation {kind}")
        pos += 1
    return (None, None)


def _branch(qubits, candidates, pos, p, last_change, readable):
    for q in candidates:
        if last_change[q] < pos and q in readable:
            return _measure(qubits, q, pos, p)
    raise StructuralError(
        f"operation {pos} entangles qubits {candidates} that cannot be measured early"
    )


def _phase(qubits, q, f):
    v = qubits[q]
    if not isinstance(v, int):
        qubits[q] = (v[0], v[1] * f)
    # a phase on a definite |1> is global and does not affect readout


def _flip(qubits, q):
    v = qubits[q]
    qubits[q] = 1 - v if isinstance(v, int) else (v[1], v[0])


def _leaf(qubits, targets, p):
    value = 0
    prob = p
    for i, q in enumerate(targets):
        v = qubits[q]
        if isinstance(v, int):
            bit = v
        else:
            w0, w1 = abs(v[0]) ** 2, abs(v[1]) ** 2
            bit = 1 if w1 > w0 + sim.statevector.TIE_TOLERANCE else 0
            prob *= w1 if bit else w0
        value |= bit << i
    return value, prob
