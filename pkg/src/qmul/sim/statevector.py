"""Dense state-vector simulation with exact dyadic phases."""
from __future__ import annotations

import importlib
import logging
import os
from dataclasses import dataclass

import numpy as np

from ..circuit import Circuit, DyadicAngle, Gate, GateKind
from ..errors import CapacityError, DomainError, StructuralError

log = logging.getLogger(__name__)

DEFAULT_DENSE_LIMIT = 26
TIE_TOLERANCE = 1e-12


def _load_backend(name: str | None = None):
    """Compiled kernels unless missing or QMUL_BACKEND=python."""
    name = name or os.environ.get("QMUL_BACKEND", "auto")
    if name not in ("auto", "cython", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name != "python":
        try:
            return importlib.import_module("qmul.sim._kernels")
        except ImportError:
            if name == "cython":
                raise
            log.debug("compiled kernels unavailable, using numpy fallback")
    return importlib.import_module("qmul.sim._fallback")


kernels = _load_backend()


def active_backend() -> str:
    return "cython" if kernels.__name__.endswith("_kernels") else "python"


def use_backend(name: str) -> str:
    """Switch the active kernel module; returns the name now in use."""
    global kernels
    kernels = _load_backend(name)
    return active_backend()


def dense_limit() -> int:
    raw = os.environ.get("QMUL_DENSE_LIMIT")
    if raw is None:
        return DEFAULT_DENSE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"QMUL_DENSE_LIMIT must be an integer, got {raw!r}") from None


@dataclass
class StateVector:
    """``amplitudes[b]`` is the amplitude of basis state ``|b>``, bit q of b = qubit q."""

    m: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> StateVector:
        return StateVector(self.m, self.amplitudes.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class ReadoutResult:
    value: int
    probability: float


def _check_capacity(m: int) -> None:
    limit = dense_limit()
    if m > limit:
        raise CapacityError(
            f"{m} qubits exceed the dense limit of {limit} "
            f"({16 << m} bytes); use hybrid mode or raise QMUL_DENSE_LIMIT"
        )


def init_basis(m: int, value: int) -> StateVector:
    if m < 1:
        raise DomainError(f"qubit count must be >= 1, got {m}")
    _check_capacity(m)
    if not 0 <= value < (1 << m):
        raise DomainError(f"basis value {value} out of range for {m} qubits")
    amps = np.zeros(1 << m, dtype=np.complex128)
    amps[value] = 1.0
    return StateVector(m, amps)


def from_amplitudes(amplitudes) -> StateVector:
    amps = np.ascontiguousarray(amplitudes, dtype=np.complex128)
    m = amps.shape[0].bit_length() - 1
    if amps.ndim != 1 or amps.shape[0] != 1 << m or m < 1:
        raise StructuralError("amplitude array length must be a power of two >= 2")
    _check_capacity(m)
    return StateVector(m, amps)


def _check_qubits(state: StateVector, qubits) -> None:
    for q in qubits:
        if not 0 <= q < state.m:
            raise StructuralError(f"qubit {q} out of range for a {state.m}-qubit state")


def apply(state: StateVector, gate: Gate) -> StateVector:
    """Apply ``gate`` in place and return ``state``."""
    _check_qubits(state, gate.qubits)
    s, q = state.amplitudes, gate.qubits
    kind = gate.kind
    if kind is GateKind.CPHASE:
        kernels.cphase(s, q[0], q[1], gate.angle.phase())
    elif kind is GateKind.H:
        kernels.h(s, q[0])
    elif kind is GateKind.TOFFOLI:
        kernels.toffoli(s, q[0], q[1], q[2])
    elif kind is GateKind.X:
        kernels.x(s, q[0])
    elif kind is GateKind.SWAP:
        kernels.swap(s, q[0], q[1])
    else:  # pragma: no cover - GateKind is closed
        raise StructuralError(f"unknown gate kind {kind}")
    return state


def apply_phase(state: StateVector, qubit: int, angle: DyadicAngle) -> StateVector:
    """Unconditional single-qubit phase ``diag(1, e^{i angle})``.

    Not part of the circuit gate set; hybrid simulation uses it for a
    controlled phase whose control is classically 1.
    """
    _check_qubits(state, (qubit,))
    kernels.phase(state.amplitudes, qubit, angle.phase())
    return state


FUSE_MIN_GATES = 4
FUSE_MAX_QUBITS = 16


def _phase_table(gates, qubits) -> np.ndarray:
    pos = {q: k for k, q in enumerate(qubits)}
    idx = np.arange(1 << len(qubits))
    table = np.ones(idx.shape[0], dtype=np.complex128)
    for g in gates:
        both = ((idx >> pos[g.qubits[0]]) & 1) & ((idx >> pos[g.qubits[1]]) & 1)
        table[both == 1] *= g.angle.phase()
    return table


def _apply_diagonal_run(state: StateVector, gates) -> None:
    qubits = sorted({q for g in gates for q in g.qubits})
    _check_qubits(state, qubits)
    kernels.diagonal(state.amplitudes, np.array(qubits, dtype=np.int_), _phase_table(gates, qubits))


def run(state: StateVector, circuit: Circuit, fuse: bool = True) -> StateVector:
    """Apply the circuit's gates in order.

    With ``fuse`` a run of consecutive controlled phases is applied as one
    diagonal pass; the result is the same unitary.
    """
    if circuit.qubit_count != state.m:
        raise StructuralError(f"circuit has {circuit.qubit_count} qubits, state has {state.m}")
    gates = circuit.gates
    i = 0
    while i < len(gates):
        if fuse and gates[i].kind is GateKind.CPHASE:
            j, touched = i, set()
            while j < len(gates) and gates[j].kind is GateKind.CPHASE:
                if len(touched | set(gates[j].qubits)) > FUSE_MAX_QUBITS:
                    break
                touched.update(gates[j].qubits)
                j += 1
            if j - i >= FUSE_MIN_GATES:
                _apply_diagonal_run(state, gates[i:j])
                i = j
                continue
        apply(state, gates[i])
        i += 1
    return state


def marginal(state: StateVector, qubits) -> np.ndarray:
    """Probability of each value of ``qubits`` (little-endian in list order)."""
    qubits = list(qubits)
    if len(set(qubits)) != len(qubits):
        raise StructuralError(f"duplicate qubits in readout list {qubits}")
    _check_qubits(state, qubits)
    m = state.m
    probs = state.probabilities().reshape((2,) * m)
    # axis a of the tensor is qubit m-1-a
    keep = [m - 1 - q for q in reversed(qubits)]
    drop = tuple(a for a in range(m) if a not in keep)
    reduced = probs.sum(axis=drop) if drop else probs
    # remaining axes are in ascending order; reorder to qubits[-1] ... qubits[0]
    order = np.argsort(np.argsort(keep))
    return np.transpose(reduced, order).reshape(-1)


def readout(state: StateVector, qubits) -> ReadoutResult:
    """Most probable value of ``qubits``; ties go to the lower value."""
    dist = marginal(state, qubits)
    best = dist.max()
    value = int(np.flatnonzero(dist >= best - TIE_TOLERANCE)[0])
    return ReadoutResult(value, float(dist[value]))
