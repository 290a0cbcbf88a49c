"""OpenQASM 3 text emission."""
from __future__ import annotations

from .circuit import Circuit, DyadicAngle, GateKind

_NAMES = {
    GateKind.H: "h",
    GateKind.X: "x",
    GateKind.SWAP: "swap",
    GateKind.CPHASE: "cp",
    GateKind.TOFFOLI: "ccx",
}


def format_angle(angle: DyadicAngle) -> str:
    """``sign * 2pi / 2**k`` written as a power-of-two fraction of pi.

    OpenQASM 3 uses ``**`` for powers (``^`` is XOR), so the angle for
    ``k = 4`` comes out as ``pi/2**3``.
    """
    sign = "-" if angle.sign < 0 else ""
    k = angle.denom_pow
    if k == 0:
        return f"{sign}2*pi"
    if k == 1:
        return f"{sign}pi"
    return f"{sign}pi/2**{k - 1}"


def to_qasm(circuit: Circuit, comments: bool = True) -> str:
    starts = {}
    if comments:
        for a in circuit.annotations:
            label = a.kind if a.index is None else f"{a.kind} {a.index}"
            starts.setdefault(a.start, []).append(label)
    lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{circuit.qubit_count}] q;"]
    for pos, g in enumerate(circuit.gates):
        for label in starts.get(pos, ()):
            lines.append(f"// {label}")
        args = ", ".join(f"q[{i}]" for i in g.qubits)
        if g.kind is GateKind.CPHASE:
            lines.append(f"cp({format_angle(g.angle)}) {args};")
        else:
            lines.append(f"{_NAMES[g.kind]} {args};")
    return "\n".join(lines) + "\n"
