import itertools
import math

import numpy as np
import pytest

from qmul import sim
from qmul.arith import (
    AdderPlan,
    add_values,
    build_multiplier,
    carry_count,
    fourier_add_block,
    iqft_circuit,
    parallel_adder,
    partial_product_stage,
    qft_circuit,
    simulate_multiply,
)
from qmul.circuit import Circuit, GateKind, compute_metrics, layout_for
from qmul.errors import CapacityError, DomainError, StructuralError
from qmul.hybrid import classical_step
from qmul.verify import oracle_partials

from oracles import random_state


def _basis(m, regs_values):
    idx = 0
    for reg, v in regs_values:
        for k, q in enumerate(reg):
            idx |= ((v >> k) & 1) << q
    return idx


def _dense_read(circuit, start, qubits):
    r = sim.readout(sim.run(sim.init_basis(circuit.qubit_count, start), circuit), qubits)
    return r.value, r.probability


class TestQft:
    def test_one_qubit_is_hadamard(self):
        assert [g.kind for g in qft_circuit([0]).gates] == [GateKind.H]

    def test_three_qubit_counts(self):
        m = compute_metrics(qft_circuit([0, 1, 2]))
        assert (m.counts["h"], m.counts["cphase"], m.counts["swap"]) == (3, 3, 0)

    @pytest.mark.parametrize("m", [1, 2, 5, 9])
    def test_counts_general(self, m):
        c = compute_metrics(qft_circuit(list(range(m)), swaps=True)).counts
        assert c["h"] == m and c["cphase"] == m * (m - 1) // 2 and c["swap"] == m // 2

    @pytest.mark.parametrize("m", [1, 3, 6])
    def test_zero_gives_uniform(self, m):
        s = sim.run(sim.init_basis(m, 0), qft_circuit(list(range(m))))
        np.testing.assert_allclose(s.amplitudes, np.full(1 << m, 2 ** (-m / 2)), atol=1e-12)

    def test_empty_register(self):
        with pytest.raises(DomainError):
            qft_circuit([])

    def test_angles_are_exact_dyadics(self):
        ks = sorted({g.angle.denom_pow for g in qft_circuit(list(range(5))).gates if g.angle})
        assert ks == [2, 3, 4, 5]


class TestIqft:
    @pytest.mark.parametrize("swaps", [False, True])
    def test_inverts_random_state(self, rng, swaps):
        q = list(range(5))
        c = Circuit(5, qft_circuit(q, swaps).gates + iqft_circuit(q, swaps).gates)
        v = random_state(rng, 5)
        np.testing.assert_allclose(sim.run(sim.from_amplitudes(v.copy()), c).amplitudes, v, atol=1e-9)

    def test_one_qubit(self):
        assert [g.kind for g in iqft_circuit([3]).gates] == [GateKind.H]

    @pytest.mark.parametrize("m", [2, 4, 7])
    def test_reverse_with_negated_angles(self, m):
        fwd, inv = qft_circuit(list(range(m))), iqft_circuit(list(range(m)))
        assert len(fwd) == len(inv)
        for a, b in zip(fwd.gates, reversed(inv.gates)):
            assert a.kind == b.kind and a.qubits == b.qubits
            if a.angle:
                assert b.angle == -a.angle


class TestFourierAdd:
    @pytest.mark.parametrize("a,b,expected", [(0, 0, 0), (3, 2, 5), (7, 1, 0)])
    @pytest.mark.parametrize("swaps", [False, True])
    def test_examples(self, a, b, expected, swaps):
        acc, add = [0, 1, 2], [3, 4, 5]
        c = Circuit(6, qft_circuit(acc, swaps).gates + fourier_add_block(add, acc, swaps).gates
                    + iqft_circuit(acc, swaps).gates)
        value, p = _dense_read(c, _basis(6, [(acc, a), (add, b)]), acc)
        assert value == (a + b) % 8 == expected and p > 1 - 1e-9

    def test_overlap(self):
        with pytest.raises(StructuralError):
            fourier_add_block([2, 3], [0, 1, 2])

    def test_wider_addend(self):
        with pytest.raises(StructuralError):
            fourier_add_block([3, 4, 5], [0, 1])

    def test_zero_addend_is_noop(self, rng):
        """Addend |0> leaves any accumulator state untouched (all controls 0)."""
        acc, add = [0, 1, 2, 3], [4, 5, 6]
        c = fourier_add_block(add, acc)
        v = np.zeros(1 << 7, dtype=complex)
        v[: 1 << 4] = random_state(rng, 4)
        out = sim.run(sim.from_amplitudes(v.copy()), Circuit(7, c.gates)).amplitudes
        np.testing.assert_allclose(out, v, atol=1e-15)

    def test_superposed_accumulator(self, rng):
        """Adding b to a superposition of accumulator values shifts every branch."""
        acc, add = [0, 1, 2, 3], [4, 5]
        c = Circuit(6, qft_circuit(acc).gates + fourier_add_block(add, acc).gates + iqft_circuit(acc).gates)
        amps = random_state(rng, 4)
        v = np.zeros(64, dtype=complex)
        b = 3
        for a in range(16):
            v[_basis(6, [(acc, a), (add, b)])] = amps[a]
        out = sim.run(sim.from_amplitudes(v), c).amplitudes
        for a in range(16):
            assert abs(out[_basis(6, [(acc, (a + b) % 16), (add, b)])] - amps[a]) < 1e-9


class TestParallelAdder:
    def test_three_addends_from_zero(self):
        acc = list(range(5))
        regs = [list(range(5 + 3 * i, 8 + 3 * i)) for i in range(3)]
        plan = AdderPlan(acc, regs, acc[3:])
        c = parallel_adder(plan)
        start = _basis(c.qubit_count, list(zip(regs, [5, 6, 7])))
        assert _dense_read(c, start, acc)[0] == 18
        assert compute_metrics(c).qft_blocks == 1 and compute_metrics(c).iqft_blocks == 1

    def test_zero_addends_keeps_value(self):
        c = parallel_adder(AdderPlan((0, 1, 2), ()))
        assert _dense_read(c, 6, [0, 1, 2])[0] == 6

    def test_block_count_independent_of_addends(self):
        plan = AdderPlan.for_values(3, 4)
        m = compute_metrics(parallel_adder(plan))
        assert (m.qft_blocks, m.iqft_blocks) == (1, 1)
        assert len(parallel_adder(plan).blocks("adder")) == 3

    @pytest.mark.parametrize("m", range(1, 6))
    def test_exhaustive_two_operand(self, m):
        acc, add = list(range(m)), list(range(m, 2 * m))
        c = parallel_adder(AdderPlan(acc, [add]))
        for a, b in itertools.product(range(1 << m), repeat=2):
            value, p = _dense_read(c, _basis(2 * m, [(acc, a), (add, b)]), acc)
            assert value == (a + b) % (1 << m) and p > 1 - 1e-9, (a, b)

    def test_200_random_triples(self):
        rng = np.random.default_rng(7)
        plan = AdderPlan.for_values(3, 3)
        assert len(plan.carry_qubits) == 2
        c = parallel_adder(plan)
        for a, b, d in rng.integers(0, 8, size=(200, 3)):
            start = _basis(c.qubit_count, [(plan.accumulator, int(a)), (plan.addends[0], int(b)),
                                           (plan.addends[1], int(d))])
            assert _dense_read(c, start, plan.accumulator)[0] == a + b + d

    def test_plan_validation(self):
        with pytest.raises(StructuralError):
            AdderPlan((0, 1), ((1, 2),))
        with pytest.raises(StructuralError):
            AdderPlan((0, 1), ((2, 3, 4),))
        with pytest.raises(StructuralError):
            AdderPlan((0, 1, 2), ((3,), (3,)))
        with pytest.raises(StructuralError):
            AdderPlan((0, 1, 2), (), carry_qubits=(0,))

    @pytest.mark.parametrize("count,t", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)])
    def test_carry_count(self, count, t):
        assert carry_count(count) == t


class TestAddValues:
    def test_examples(self):
        assert add_values([5, 6, 7], 3).total == 18
        assert add_values([0], 3).total == 0
        r = add_values([3, 3], 2, t=1)
        assert r.total == 6 and r.width == 3

    def test_modular_when_t_too_small(self):
        assert add_values([7, 7, 7], 3, t=0).total == 21 % 8

    def test_hybrid_matches(self):
        assert add_values([5, 6, 7], 3, mode="hybrid").total == 18

    def test_range(self):
        with pytest.raises(DomainError):
            add_values([8], 3)


class TestPartialProducts:
    def _aux_values(self, n, x, y):
        lay = layout_for(n)
        bits = _basis(lay.total_qubits, [(lay.x_qubits, x), (lay.y_qubits, y)])
        for g in partial_product_stage(lay).gates:
            bits = classical_step(bits, g)
        return [sum(((bits >> q) & 1) << k for k, q in enumerate(r)) for r in lay.aux_registers]

    def test_worked_example(self):
        assert self._aux_values(3, 7, 5) == [7, 0, 28]

    def test_worked_example_dense(self):
        lay = layout_for(3)
        c = partial_product_stage(lay)
        s = sim.run(sim.init_basis(22, _basis(22, [(lay.x_qubits, 7), (lay.y_qubits, 5)])), c)
        assert [sim.readout(s, r).value for r in lay.aux_registers] == [7, 0, 28]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_all_pairs_match_schoolbook(self, n):
        for x, y in itertools.product(range(1 << n), repeat=2):
            assert self._aux_values(n, x, y) == oracle_partials(x, y, n)

    def test_zero_operand(self):
        assert self._aux_values(3, 0, 5) == [0, 0, 0]
        assert self._aux_values(3, 6, 0) == [0, 0, 0]

    def test_toffoli_count(self):
        assert len(partial_product_stage(layout_for(3))) == 9

    def test_layout_mismatch(self):
        lay = layout_for(3)
        bad = type(lay)(3, lay.y_qubits, lay.x_qubits, lay.aux_registers, lay.total_qubits)
        with pytest.raises(StructuralError):
            partial_product_stage(bad)


class TestBuildMultiplier:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_structure(self, n):
        mc = build_multiplier(n)
        m = compute_metrics(mc.circuit)
        assert m.counts["toffoli"] == n * n
        assert m.qft_blocks == m.iqft_blocks == 1
        assert m.qubit_count == 2 * n * n + n + 1
        (qft,), (iqft,) = mc.circuit.blocks("qft"), mc.circuit.blocks("iqft")
        assert len(qft.qubits) == len(iqft.qubits) == 2 * n
        assert len(mc.circuit.blocks("adder")) == n - 1
        assert set(mc.result_qubits) <= set(mc.layout.aux_registers[0])

    def test_n3_qft_on_lowest_six(self):
        (qft,) = build_multiplier(3).circuit.blocks("qft")
        assert qft.qubits == (0, 1, 2, 3, 4, 5)

    def test_domain(self):
        with pytest.raises(DomainError):
            build_multiplier(0)

    def test_block_order(self):
        kinds = [a.kind for a in build_multiplier(3).circuit.annotations]
        assert kinds == ["toffoli-stage", "qft", "adder", "adder", "iqft"]


class TestSimulateMultiply:
    @pytest.mark.parametrize("mode", ["dense", "hybrid"])
    def test_worked_example(self, mode):
        r = simulate_multiply(7, 5, 3, mode)
        assert r.product == 35 and r.probability >= 1 - 1e-9

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_annihilator_and_identity(self, n):
        for k in range(1 << n):
            assert simulate_multiply(0, k, n, "hybrid").product == 0
            assert simulate_multiply(1, k, n, "hybrid").product == k

    def test_n1_dense(self):
        for a, b in itertools.product((0, 1), repeat=2):
            assert simulate_multiply(a, b, 1, "dense").product == a * b

    def test_capacity(self):
        with pytest.raises(CapacityError, match="hybrid"):
            simulate_multiply(9, 11, 4, "dense")

    def test_capacity_env(self, monkeypatch):
        monkeypatch.setenv("QMUL_DENSE_LIMIT", "10")
        with pytest.raises(CapacityError):
            simulate_multiply(1, 1, 2, "dense")

    @pytest.mark.parametrize("x,y", [(8, 0), (-1, 0), (0, 8)])
    def test_range(self, x, y):
        with pytest.raises(DomainError):
            simulate_multiply(x, y, 3)

    def test_bad_mode(self):
        with pytest.raises(DomainError):
            simulate_multiply(1, 1, 2, "shots")

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_hybrid_engines_agree(self, n):
        for x, y in itertools.product(range(1 << n), repeat=2):
            d = simulate_multiply(x, y, n, "hybrid", engine="dense")
            f = simulate_multiply(x, y, n, "hybrid", engine="factored")
            assert d.product == f.product == x * y
            assert abs(d.probability - f.probability) < 1e-9

    def test_swaps_variant(self):
        for x, y in itertools.product(range(8), repeat=2):
            assert simulate_multiply(x, y, 3, "hybrid", swaps=True).product == x * y
        assert simulate_multiply(6, 7, 3, "dense", swaps=True).product == 42

    def test_dense_two_bit_exhaustive(self):
        for x, y in itertools.product(range(4), repeat=2):
            r = simulate_multiply(x, y, 2, "dense")
            assert r.product == x * y and r.probability >= 1 - 1e-9
