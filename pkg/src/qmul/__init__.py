"""Non-modular quantum multiplication: Toffoli partial products summed by a
QFT adder that transforms the accumulator once, with a dense simulator and
exhaustive classical verification."""
from .arith import (
    AdderPlan,
    MultiplierCircuit,
    build_multiplier,
    fourier_add_block,
    iqft_circuit,
    parallel_adder,
    partial_product_stage,
    qft_circuit,
    simulate_multiply,
)
from .circuit import (
    Circuit,
    CircuitMetrics,
    DyadicAngle,
    Gate,
    GateKind,
    RegisterLayout,
    compute_metrics,
    layout_for,
)
from .errors import CapacityError, DomainError, QmulError, StructuralError

__version__ = "0.1.0"
