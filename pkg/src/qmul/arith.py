"""QFT arithmetic: Fourier transforms, Draper-style addition, the single-pass
multi-input adder, the Toffoli partial-product stage and the multiplier.

QFT convention: on a little-endian register ``q`` the swap-free transform
leaves qubit ``q[p]`` in ``(|0> + exp(2*pi*i*a / 2**(p+1)) |1>) / sqrt(2)``
for input ``|a>``. With ``swaps=True`` the register is reversed at the end so
the circuit realizes the DFT matrix exactly; every adder here accepts the
same flag and targets the matching qubits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .circuit import (
    Circuit,
    CircuitBuilder,
    RegisterLayout,
    cphase,
    fragment,
    h,
    layout_for,
    swap,
    toffoli,
)
from .errors import CapacityError, DomainError, StructuralError
from . import hybrid, sim


def _register(qubits: Sequence[int], what: str) -> tuple[int, ...]:
    qubits = tuple(int(q) for q in qubits)
    if not qubits:
        raise DomainError(f"{what} register is empty")
    if len(set(qubits)) != len(qubits):
        raise StructuralError(f"{what} register has repeated qubits: {qubits}")
    return qubits


def qft_circuit(qubits: Sequence[int], swaps: bool = False) -> Circuit:
    q = _register(qubits, "QFT")
    m = len(q)
    gates = []
    for j in reversed(range(m)):
        gates.append(h(q[j]))
        for l in reversed(range(j)):
            gates.append(cphase(q[l], q[j], j - l + 1))
    if swaps:
        gates += [swap(q[i], q[m - 1 - i]) for i in range(m // 2)]
    return fragment(gates)


def iqft_circuit(qubits: Sequence[int], swaps: bool = False) -> Circuit:
    return qft_circuit(qubits, swaps).inverse()


def fourier_add_block(addend: Sequence[int], accumulator: Sequence[int], swaps: bool = False) -> Circuit:
    """Controlled phases adding ``|addend>`` into a Fourier-basis accumulator.

    Addend bit ``j`` rotates the accumulator qubit carrying phase
    ``2*pi*a / 2**(p+1)`` by ``2*pi / 2**(p - j + 1)`` for every ``p >= j``;
    rotations with ``p < j`` are whole turns and are omitted.
    """
    b = _register(addend, "addend")
    acc = _register(accumulator, "accumulator")
    if set(b) & set(acc):
        raise StructuralError(f"addend {b} overlaps accumulator {acc}")
    m = len(acc)
    if len(b) > m:
        raise StructuralError(f"addend width {len(b)} exceeds accumulator width {m}")
    gates = []
    for j, ctrl in enumerate(b):
        for p in range(j, m):
            target = acc[m - 1 - p] if swaps else acc[p]
            gates.append(cphase(ctrl, target, p - j + 1))
    return fragment(gates)


def carry_count(n_total: int) -> int:
    """Carry qubits needed so ``n_total`` equal-width numbers never overflow."""
    if n_total < 1:
        raise DomainError("at least one number is required")
    return math.ceil(math.log2(n_total))


@dataclass(frozen=True)
class AdderPlan:
    """Accumulator register (carry qubits on top) and the registers added into it."""

    accumulator: tuple[int, ...]
    addends: tuple[tuple[int, ...], ...]
    carry_qubits: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "accumulator", tuple(self.accumulator))
        object.__setattr__(self, "addends", tuple(tuple(a) for a in self.addends))
        object.__setattr__(self, "carry_qubits", tuple(self.carry_qubits))
        self.validate()

    @property
    def width(self) -> int:
        return len(self.accumulator)

    def validate(self) -> None:
        _register(self.accumulator, "accumulator")
        seen = set(self.accumulator)
        for i, reg in enumerate(self.addends):
            _register(reg, f"addend {i}")
            if seen & set(reg):
                raise StructuralError(f"addend {i} shares qubits with another register")
            if len(reg) > self.width:
                raise StructuralError(f"addend {i} is wider than the accumulator")
            seen |= set(reg)
        t = len(self.carry_qubits)
        if t and self.carry_qubits != self.accumulator[self.width - t:]:
            raise StructuralError("carry qubits must be the top qubits of the accumulator")

    @classmethod
    def for_values(cls, bits: int, count: int, t: int | None = None) -> AdderPlan:
        """Packed plan summing ``count`` numbers of ``bits`` bits.

        The first number is loaded into the accumulator; the others get their
        own registers above it. ``t`` defaults to ``carry_count(count)``.
        """
        if bits < 1 or count < 1:
            raise DomainError("bits and count must be >= 1")
        t = carry_count(count) if t is None else t
        if t < 0:
            raise DomainError("carry count must be >= 0")
        width = bits + t
        acc = tuple(range(width))
        addends = tuple(tuple(range(width + i * bits, width + (i + 1) * bits)) for i in range(count - 1))
        return cls(acc, addends, acc[bits:])

    @property
    def qubit_count(self) -> int:
        return 1 + max(q for reg in (self.accumulator, *self.addends) for q in reg)


def parallel_adder(plan: AdderPlan, swaps: bool = False) -> Circuit:
    """One QFT, an add block per addend, one IQFT."""
    plan.validate()
    acc = plan.accumulator
    b = CircuitBuilder(plan.qubit_count)
    b.add(qft_circuit(acc, swaps), "qft", acc)
    for i, reg in enumerate(plan.addends):
        b.add(fourier_add_block(reg, acc, swaps), "adder", reg, index=i + 1)
    b.add(iqft_circuit(acc, swaps), "iqft", acc)
    return b.build()


def partial_product_stage(layout: RegisterLayout) -> Circuit:
    """n*n Toffolis writing ``y_i * x_j`` to bit ``i + j`` of aux register ``i``.

    Loop order follows the schoolbook rows: the least significant y bit
    first, and within a row the x bits from least significant up.
    """
    _check_layout(layout)
    n = layout.n
    gates = [
        toffoli(layout.y_qubits[i], layout.x_qubits[j], layout.aux_registers[i][i + j])
        for i in range(n)
        for j in range(n)
    ]
    return fragment(gates, layout.total_qubits)


def _check_layout(layout: RegisterLayout) -> None:
    ref = layout_for(layout.n)
    if layout != ref:
        raise StructuralError(f"layout does not match the canonical {layout.n}-bit layout")


@dataclass(frozen=True)
class MultiplierCircuit:
    n: int
    layout: RegisterLayout
    circuit: Circuit
    result_qubits: tuple[int, ...]
    swaps: bool = False

    def basis_index(self, x: int, y: int) -> int:
        return input_basis_index(self.layout, x, y)


@lru_cache(maxsize=32)
def build_multiplier(n: int, swaps: bool = False) -> MultiplierCircuit:
    layout = layout_for(n)
    acc = layout.accumulator
    # one carry qubit suffices: the product of two n-bit numbers is < 2**(2n)
    plan = AdderPlan(acc, layout.aux_registers[1:], (layout.carry_qubit,))
    b = CircuitBuilder(layout.total_qubits)
    b.add(partial_product_stage(layout), "toffoli-stage")
    b.add(parallel_adder(plan, swaps))
    return MultiplierCircuit(n, layout, b.build(), acc, swaps)


def check_operands(x: int, y: int, n: int) -> None:
    if n < 1:
        raise DomainError(f"bit-width must be >= 1, got {n}")
    for name, v in (("x", x), ("y", y)):
        if not 0 <= v < (1 << n):
            raise DomainError(f"{name}={v} does not fit in {n} bits")


@dataclass(frozen=True)
class MultiplyResult:
    product: int
    probability: float
    mode: str
    engine: str


def input_basis_index(layout: RegisterLayout, x: int, y: int) -> int:
    """Global basis index of ``|x>|y>`` with all aux qubits in ``|0>``."""
    check_operands(x, y, layout.n)
    idx = 0
    for k in range(layout.n):
        idx |= ((x >> k) & 1) << layout.x_qubits[k]
        idx |= ((y >> k) & 1) << layout.y_qubits[k]
    return idx


def simulate_product_circuit(circuit: Circuit, layout: RegisterLayout, x: int, y: int,
                             mode: str = "dense", engine: str = "auto") -> MultiplyResult:
    """Run any circuit built on ``layout`` (multiplier or baseline) and read the accumulator.

    ``dense`` evolves every qubit. ``hybrid`` evaluates the Toffoli stage on
    classical bits and simulates only the accumulator, with every addend
    control resolved classically.
    """
    start = input_basis_index(layout, x, y)
    acc = layout.accumulator
    if mode == "dense":
        total = circuit.qubit_count
        if total > sim.dense_limit():
            raise CapacityError(
                f"dense simulation of n={layout.n} needs {total} qubits, above the limit of "
                f"{sim.dense_limit()}; use hybrid mode"
            )
        state = sim.run(sim.init_basis(total, start), circuit)
        r = sim.readout(state, acc)
        return MultiplyResult(r.value, r.probability, "dense", "dense")
    if mode == "hybrid":
        prefix = circuit.blocks("toffoli-stage")[0].stop
        r = hybrid.simulate(circuit, start, acc, acc, classical_prefix=prefix, engine=engine)
        return MultiplyResult(r.value, r.probability, "hybrid", r.engine)
    raise DomainError(f"unknown mode {mode!r}; expected 'dense' or 'hybrid'")


def simulate_multiply(x: int, y: int, n: int, mode: str = "dense",
                      swaps: bool = False, engine: str = "auto") -> MultiplyResult:
    """Multiply basis inputs ``x`` and ``y`` on the ``n``-bit multiplier circuit."""
    check_operands(x, y, n)
    mc = build_multiplier(n, swaps)
    return simulate_product_circuit(mc.circuit, mc.layout, x, y, mode, engine)


@dataclass(frozen=True)
class SumResult:
    total: int
    probability: float
    width: int
    carry: int
    circuit: Circuit


def add_values(values: Sequence[int], bits: int, t: int | None = None,
               mode: str = "auto", swaps: bool = False) -> SumResult:
    """Sum ``values`` with the single-pass adder; returns the sum mod 2**(bits+t)."""
    values = list(values)
    if not values:
        raise DomainError("no values to add")
    for v in values:
        if not 0 <= v < (1 << bits):
            raise DomainError(f"value {v} does not fit in {bits} bits")
    plan = AdderPlan.for_values(bits, len(values), t)
    circ = parallel_adder(plan, swaps)
    start = values[0]
    for reg, v in zip(plan.addends, values[1:]):
        for k, q in enumerate(reg):
            start |= ((v >> k) & 1) << q
    if mode == "auto":
        mode = "dense" if circ.qubit_count <= sim.dense_limit() else "hybrid"
    if mode == "dense":
        state = sim.run(sim.init_basis(circ.qubit_count, start), circ)
        r = sim.readout(state, plan.accumulator)
    elif mode == "hybrid":
        r = hybrid.simulate(circ, start, plan.accumulator, plan.accumulator)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return SumResult(r.value, r.probability, plan.width, len(plan.carry_qubits), circ)
