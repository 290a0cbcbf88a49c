"""Gate set, circuit container, register layout and static metrics.

Qubit indices are zero-based and little-endian: in a register listed as
``[q0, q1, ...]`` the qubit ``q0`` carries significance 2**0.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import DomainError, StructuralError


class GateKind(str, Enum):
    H = "h"
    X = "x"
    SWAP = "swap"
    CPHASE = "cphase"
    TOFFOLI = "toffoli"


_ARITY = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.SWAP: 2,
    GateKind.CPHASE: 2,
    GateKind.TOFFOLI: 3,
}

# exp(i * 2pi / 2**k) for small k, exact in floating point
_EXACT_PHASES = {0: 1 + 0j, 1: -1 + 0j, 2: 1j}


@dataclass(frozen=True, order=True)
class DyadicAngle:
    """The angle ``sign * 2*pi / 2**denom_pow``, stored exactly."""

    sign: int
    denom_pow: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise StructuralError(f"angle sign must be +1 or -1, got {self.sign!r}")
        if not isinstance(self.denom_pow, int) or self.denom_pow < 0:
            raise StructuralError(f"denom_pow must be a non-negative int, got {self.denom_pow!r}")

    def __neg__(self) -> DyadicAngle:
        return DyadicAngle(-self.sign, self.denom_pow)

    @property
    def radians(self) -> float:
        return self.sign * 2.0 * math.pi / (1 << self.denom_pow)

    def phase(self) -> complex:
        """exp(i * angle); exact for multiples of pi/2."""
        if self.denom_pow in _EXACT_PHASES:
            p = _EXACT_PHASES[self.denom_pow]
            return p if self.sign > 0 else p.conjugate()
        return cmath.exp(1j * self.radians)

    def __str__(self):
        return f"{'-' if self.sign < 0 else ''}2pi/2^{self.denom_pow}"


@dataclass(frozen=True)
class Gate:
    """One gate. ``qubits`` order per kind:

    * h, x: ``(target,)``
    * swap: ``(a, b)``
    * cphase: ``(control, target)``; the gate is symmetric in the two
    * toffoli: ``(control1, control2, target)``
    """

    kind: GateKind
    qubits: tuple[int, ...]
    angle: DyadicAngle | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if len(qubits) != _ARITY[kind]:
            raise StructuralError(f"{kind.value} takes {_ARITY[kind]} qubits, got {qubits}")
        if len(set(qubits)) != len(qubits):
            raise StructuralError(f"{kind.value} qubits must be distinct, got {qubits}")
        if any(q < 0 for q in qubits):
            raise StructuralError(f"negative qubit index in {qubits}")
        if (kind is GateKind.CPHASE) != (self.angle is not None):
            raise StructuralError("an angle is required for cphase and only for cphase")

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind is GateKind.CPHASE:
            return self.qubits[:1]
        if self.kind is GateKind.TOFFOLI:
            return self.qubits[:2]
        return ()

    @property
    def targets(self) -> tuple[int, ...]:
        return self.qubits[len(self.controls):]

    def remap(self, mapping) -> Gate:
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle)


def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


def cphase(control: int, target: int, k: int, sign: int = 1) -> Gate:
    return Gate(GateKind.CPHASE, (control, target), DyadicAngle(sign, k))


def toffoli(c1: int, c2: int, target: int) -> Gate:
    return Gate(GateKind.TOFFOLI, (c1, c2, target))


@dataclass(frozen=True)
class Annotation:
    """Marks gates ``[start, stop)`` as one logical block.

    ``kind`` is one of ``toffoli-stage``, ``qft``, ``adder``, ``iqft``;
    ``index`` numbers repeated blocks (the addend register of an adder).
    Annotations never change what a circuit does.
    """

    kind: str
    start: int
    stop: int
    qubits: tuple[int, ...] = ()
    index: int | None = None


@dataclass(frozen=True)
class Circuit:
    qubit_count: int
    gates: tuple[Gate, ...] = ()
    annotations: tuple[Annotation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "annotations", tuple(self.annotations))
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.qubit_count, int) or self.qubit_count < 1:
            raise StructuralError(f"qubit_count must be a positive int, got {self.qubit_count!r}")
        for pos, g in enumerate(self.gates):
            if max(g.qubits) >= self.qubit_count:
                raise StructuralError(
                    f"gate {pos} ({g.kind.value} on {g.qubits}) exceeds qubit_count {self.qubit_count}"
                )
        for a in self.annotations:
            if not 0 <= a.start <= a.stop <= len(self.gates):
                raise StructuralError(f"annotation {a.kind} span [{a.start}, {a.stop}) out of range")

    def __len__(self):
        return len(self.gates)

    def blocks(self, kind: str) -> list[Annotation]:
        return [a for a in self.annotations if a.kind == kind]

    def span(self, annotation: Annotation) -> tuple[Gate, ...]:
        return self.gates[annotation.start:annotation.stop]

    def inverse(self) -> Circuit:
        """Reverse gate order and negate angles. Every gate in the set is
        self-inverse apart from the cphase angle."""
        gates = [Gate(g.kind, g.qubits, -g.angle) if g.angle else g for g in reversed(self.gates)]
        return Circuit(self.qubit_count, gates)


class CircuitBuilder:
    """Accumulates gates and block annotations, then freezes into a Circuit."""

    def __init__(self, qubit_count: int):
        self.qubit_count = qubit_count
        self.gates: list[Gate] = []
        self.annotations: list[Annotation] = []

    def add(self, gates: Iterable[Gate] | Circuit, kind: str | None = None,
            qubits: Sequence[int] = (), index: int | None = None) -> CircuitBuilder:
        start = len(self.gates)
        if isinstance(gates, Circuit):
            if kind is None:
                self.annotations.extend(
                    Annotation(a.kind, a.start + start, a.stop + start, a.qubits, a.index)
                    for a in gates.annotations
                )
            gates = gates.gates
        self.gates.extend(gates)
        if kind is not None:
            self.annotations.append(Annotation(kind, start, len(self.gates), tuple(qubits), index))
        return self

    def build(self) -> Circuit:
        return Circuit(self.qubit_count, tuple(self.gates), tuple(self.annotations))


def fragment(gates: Sequence[Gate], qubit_count: int | None = None) -> Circuit:
    """Wrap a gate list as a circuit just wide enough for its qubits."""
    if qubit_count is None:
        qubit_count = 1 + max((max(g.qubits) for g in gates), default=0)
    return Circuit(qubit_count, tuple(gates))


# -- register layout -------------------------------------------------------


@dataclass(frozen=True)
class RegisterLayout:
    """Global qubit indices of the multiplier registers.

    Index 0 is the least significant accumulator qubit. The order of
    registers along the index line is::

        aux_registers[0]   2n qubits   (first partial product + carry qubit)
        aux_registers[1]   2n-1 qubits
        ...
        aux_registers[n-1] 2n-1 qubits
        x_qubits           n qubits
        y_qubits           n qubits

    Within every register the list is little-endian, so ``x_qubits[k]`` holds
    the bit of significance 2**k. In MSB-first labels ``x_1 ... x_n`` this
    means ``x_k`` lives at ``x_qubits[n - k]`` (same for ``y``), and
    aux register ``i`` (0-based) stores the partial product of ``y_{n-i}``.
    """

    n: int
    x_qubits: tuple[int, ...]
    y_qubits: tuple[int, ...]
    aux_registers: tuple[tuple[int, ...], ...]
    total_qubits: int

    @property
    def accumulator(self) -> tuple[int, ...]:
        return self.aux_registers[0]

    @property
    def carry_qubit(self) -> int:
        return self.aux_registers[0][-1]

    def label_map(self) -> dict[str, int]:
        """MSB-first labels (``x1``, ``y3``, ``s0`` ...) to global indices.

        ``s0`` is the most significant product bit, matching the output row
        of the schoolbook diagram.
        """
        n = self.n
        labels = {}
        for k in range(1, n + 1):
            labels[f"x{k}"] = self.x_qubits[n - k]
            labels[f"y{k}"] = self.y_qubits[n - k]
        for k in range(2 * n):
            labels[f"s{k}"] = self.accumulator[2 * n - 1 - k]
        return labels


def layout_for(n: int) -> RegisterLayout:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"bit-width must be a positive integer, got {n!r}")
    nxt = 0

    def take(width):
        nonlocal nxt
        reg = tuple(range(nxt, nxt + width))
        nxt += width
        return reg

    aux = [take(2 * n)] + [take(2 * n - 1) for _ in range(n - 1)]
    xs = take(n)
    ys = take(n)
    return RegisterLayout(n, xs, ys, tuple(aux), nxt)


# -- metrics ---------------------------------------------------------------


@dataclass(frozen=True)
class CircuitMetrics:
    counts: dict[str, int]
    depth: int
    qft_blocks: int
    iqft_blocks: int
    qubit_count: int

    @property
    def total_gates(self) -> int:
        return sum(self.counts.values())

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "total_gates": self.total_gates,
            "depth": self.depth,
            "qft_blocks": self.qft_blocks,
            "iqft_blocks": self.iqft_blocks,
            "qubit_count": self.qubit_count,
        }


def compute_metrics(circuit: Circuit) -> CircuitMetrics:
    circuit.validate()
    counts = {k.value: 0 for k in GateKind}
    layer = [0] * circuit.qubit_count
    depth = 0
    for g in circuit.gates:
        counts[g.kind.value] += 1
        d = 1 + max(layer[q] for q in g.qubits)
        for q in g.qubits:
            layer[q] = d
        depth = max(depth, d)
    return CircuitMetrics(
        counts=counts,
        depth=depth,
        qft_blocks=len(circuit.blocks("qft")),
        iqft_blocks=len(circuit.blocks("iqft")),
        qubit_count=circuit.qubit_count,
    )


# -- JSON ------------------------------------------------------------------


def gate_to_dict(g: Gate) -> dict:
    d = {"kind": g.kind.value, "targets": list(g.targets), "controls": list(g.controls)}
    if g.angle is not None:
        d["angle"] = {"sign": g.angle.sign, "denom_pow": g.angle.denom_pow}
    return d


def gate_from_dict(d: dict) -> Gate:
    try:
        kind = GateKind(d["kind"])
        qubits = tuple(d.get("controls", ())) + tuple(d["targets"])
        angle = None
        if "angle" in d:
            angle = DyadicAngle(int(d["angle"]["sign"]), int(d["angle"]["denom_pow"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"bad gate record {d!r}: {exc}") from exc
    return Gate(kind, qubits, angle)


def circuit_to_dict(c: Circuit) -> dict:
    anns = []
    for a in c.annotations:
        rec = {"kind": a.kind, "start": a.start, "stop": a.stop, "qubits": list(a.qubits)}
        if a.index is not None:
            rec["index"] = a.index
        anns.append(rec)
    return {"qubits": c.qubit_count, "gates": [gate_to_dict(g) for g in c.gates], "annotations": anns}


def circuit_from_dict(d: dict) -> Circuit:
    try:
        anns = tuple(
            Annotation(a["kind"], int(a["start"]), int(a["stop"]), tuple(a.get("qubits", ())), a.get("index"))
            for a in d.get("annotations", ())
        )
        return Circuit(int(d["qubits"]), tuple(gate_from_dict(g) for g in d["gates"]), anns)
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"bad circuit record: {exc}") from exc


def dumps(c: Circuit, **kwargs) -> str:
    return json.dumps(circuit_to_dict(c), **kwargs)


def loads(text: str) -> Circuit:
    return circuit_from_dict(json.loads(text))
