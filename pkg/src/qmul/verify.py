"""Classical oracles, the sequential-QFT baseline, and verification suites."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from itertools import product as cartesian

import numpy as np

from .arith import (
    build_multiplier,
    check_operands,
    fourier_add_block,
    iqft_circuit,
    partial_product_stage,
    qft_circuit,
    simulate_product_circuit,
)
from .circuit import Circuit, CircuitBuilder, CircuitMetrics, compute_metrics, layout_for
from .errors import CapacityError, DomainError
from . import sim

PROBABILITY_FLOOR = 1 - 1e-9

BASELINE_FOOTNOTE = (
    "Baseline counts one QFT/IQFT pair per partial product (n pairs; the first "
    "only loads the accumulator). Counting only the additions between the n "
    "numbers would give n-1 pairs for the baseline."
)


def oracle_multiply(x: int, y: int) -> int:
    if x < 0 or y < 0:
        raise DomainError("operands must be non-negative")
    return x * y


def oracle_partials(x: int, y: int, n: int) -> list[int]:
    """Schoolbook rows: row i is ``x << i`` if bit i of y is set, else 0."""
    check_operands(x, y, n)
    return [(x if (y >> i) & 1 else 0) << i for i in range(n)]


@dataclass(frozen=True)
class BaselineCircuit:
    circuit: Circuit
    metrics: CircuitMetrics


def build_baseline_sequential(n: int, swaps: bool = False) -> BaselineCircuit:
    """Same Toffoli stage, but every accumulation step has its own QFT ... IQFT.

    Step 0 wraps the already loaded first partial product; steps 1..n-1 each
    add one more partial product. That makes n QFT and n IQFT blocks.
    """
    layout = layout_for(n)
    acc = layout.accumulator
    b = CircuitBuilder(layout.total_qubits)
    b.add(partial_product_stage(layout), "toffoli-stage")
    for step in range(n):
        b.add(qft_circuit(acc, swaps), "qft", acc, index=step)
        if step:
            reg = layout.aux_registers[step]
            b.add(fourier_add_block(reg, acc, swaps), "adder", reg, index=step)
        b.add(iqft_circuit(acc, swaps), "iqft", acc, index=step)
    circuit = b.build()
    return BaselineCircuit(circuit, compute_metrics(circuit))


@dataclass(frozen=True)
class Failure:
    x: int
    y: int
    expected: int
    got: int
    probability: float


@dataclass
class VerificationReport:
    n: int
    mode: str
    cases_run: int
    failures: list[Failure]
    metrics_proposed: CircuitMetrics
    metrics_baseline: CircuitMetrics
    elapsed: float
    sampling: str
    seed: int | None = None
    min_probability: float = 1.0
    baseline_footnote: str = BASELINE_FOOTNOTE
    cases: list[tuple[int, int, int, float]] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def qft_reduction(self) -> int:
        return self.metrics_baseline.qft_blocks - self.metrics_proposed.qft_blocks

    def to_dict(self, include_cases: bool = False) -> dict:
        d = {
            "n": self.n,
            "mode": self.mode,
            "sampling": self.sampling,
            "seed": self.seed,
            "cases_run": self.cases_run,
            "passed": self.passed,
            "failures": [asdict(f) for f in self.failures],
            "min_probability": self.min_probability,
            "metrics_proposed": self.metrics_proposed.to_dict(),
            "metrics_baseline": self.metrics_baseline.to_dict(),
            "qft_reduction": self.qft_reduction,
            "baseline_footnote": self.baseline_footnote,
            "elapsed": self.elapsed,
        }
        if include_cases:
            d["cases"] = [list(c) for c in self.cases]
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(**kwargs), indent=2)


def case_list(n: int, sampling) -> tuple[list[tuple[int, int]], str, int | None]:
    """Expand ``"exhaustive"`` or ``(count, seed)`` into sorted (x, y) pairs."""
    if sampling == "exhaustive":
        pairs = list(cartesian(range(1 << n), repeat=2))
        return pairs, "exhaustive", None
    count, seed = sampling
    if count < 1:
        raise DomainError("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    drawn = rng.integers(0, 1 << n, size=(count, 2), dtype=np.int64)
    pairs = sorted((int(a), int(b)) for a, b in drawn)
    return pairs, f"random:{count}", seed


def run_suite(n: int, mode: str = "hybrid", sampling="exhaustive", swaps: bool = False,
              engine: str = "auto") -> VerificationReport:
    if n < 1:
        raise DomainError(f"bit-width must be >= 1, got {n}")
    mc = build_multiplier(n, swaps)
    if mode == "dense" and mc.layout.total_qubits > sim.dense_limit():
        raise CapacityError(
            f"dense verification of n={n} needs {mc.layout.total_qubits} qubits "
            f"(limit {sim.dense_limit()}); use hybrid mode"
        )
    pairs, label, seed = case_list(n, sampling)
    baseline = build_baseline_sequential(n, swaps)
    t0 = time.perf_counter()
    failures, cases = [], []
    min_p = 1.0
    for x, y in pairs:
        r = simulate_product_circuit(mc.circuit, mc.layout, x, y, mode, engine)
        expected = oracle_multiply(x, y)
        cases.append((x, y, r.product, r.probability))
        min_p = min(min_p, r.probability)
        if r.product != expected or r.probability < PROBABILITY_FLOOR:
            failures.append(Failure(x, y, expected, r.product, r.probability))
    return VerificationReport(
        n=n,
        mode=mode,
        cases_run=len(pairs),
        failures=failures,
        metrics_proposed=compute_metrics(mc.circuit),
        metrics_baseline=baseline.metrics,
        elapsed=time.perf_counter() - t0,
        sampling=label,
        seed=seed,
        min_probability=min_p,
        cases=cases,
    )
