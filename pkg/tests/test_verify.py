import itertools
import json

import pytest

from qmul import verify
from qmul.arith import MultiplyResult, build_multiplier, simulate_product_circuit
from qmul.circuit import compute_metrics, layout_for
from qmul.errors import CapacityError, DomainError
from qmul.verify import (
    build_baseline_sequential,
    case_list,
    oracle_multiply,
    oracle_partials,
    run_suite,
)


class TestOracles:
    def test_multiply(self):
        assert oracle_multiply(7, 5) == 35
        assert oracle_multiply(0, 123) == 0

    @pytest.mark.parametrize("n", [1, 3, 8, 12])
    def test_max_product_fits_2n_bits(self, n):
        top = (1 << n) - 1
        assert oracle_multiply(top, top) == top * top < 1 << (2 * n)

    def test_negative(self):
        with pytest.raises(DomainError):
            oracle_multiply(-1, 2)

    def test_partials_examples(self):
        assert oracle_partials(7, 5, 3) == [7, 0, 28]
        assert oracle_partials(6, 0, 3) == [0, 0, 0]
        assert oracle_partials(1, 7, 3) == [1, 2, 4]

    def test_partials_range(self):
        with pytest.raises(DomainError):
            oracle_partials(8, 1, 3)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_partials_sum_to_product(self, n):
        bound = 1 << (2 * n - 1)
        for x, y in itertools.product(range(1 << n), repeat=2):
            rows = oracle_partials(x, y, n)
            assert sum(rows) == x * y
            assert all(r < bound for r in rows)


class TestBaseline:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_block_counts(self, n):
        b = build_baseline_sequential(n)
        proposed = compute_metrics(build_multiplier(n).circuit)
        assert b.metrics.qft_blocks == b.metrics.iqft_blocks == n
        assert b.metrics.qft_blocks - proposed.qft_blocks == n - 1
        assert b.metrics.counts["toffoli"] == n * n
        assert b.metrics.qubit_count == proposed.qubit_count

    def test_n1_identical_block_counts(self):
        assert build_baseline_sequential(1).metrics.qft_blocks == 1

    def test_baseline_costs_more(self):
        for n in (2, 3, 5):
            b = build_baseline_sequential(n).metrics
            p = compute_metrics(build_multiplier(n).circuit)
            assert b.total_gates > p.total_gates and b.depth > p.depth

    def test_domain(self):
        with pytest.raises(DomainError):
            build_baseline_sequential(0)

    def test_worked_example_dense(self):
        b = build_baseline_sequential(3)
        r = simulate_product_circuit(b.circuit, layout_for(3), 7, 5, "dense")
        assert r.product == 35 and r.probability >= 1 - 1e-9

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_functional_equivalence_dense(self, n):
        b = build_baseline_sequential(n)
        lay = layout_for(n)
        for x, y in itertools.product(range(1 << n), repeat=2):
            r = simulate_product_circuit(b.circuit, lay, x, y, "dense")
            assert r.product == x * y and r.probability >= 1 - 1e-9

    def test_functional_equivalence_hybrid_n5(self):
        b = build_baseline_sequential(5)
        lay = layout_for(5)
        for x, y in itertools.product(range(32), repeat=2):
            assert simulate_product_circuit(b.circuit, lay, x, y, "hybrid").product == x * y


class TestRunSuite:
    @pytest.mark.parametrize("n,cases", [(1, 4), (2, 16)])
    def test_dense_exhaustive(self, n, cases):
        r = run_suite(n, "dense")
        assert r.cases_run == cases and r.passed and r.failures == []

    def test_seeded_hybrid(self):
        r = run_suite(8, "hybrid", (1000, 42))
        assert r.cases_run == 1000 and r.passed
        assert r.seed == 42 and r.sampling == "random:1000"
        assert r.qft_reduction == 7

    def test_deterministic_under_seed(self):
        a = run_suite(6, "hybrid", (50, 9))
        b = run_suite(6, "hybrid", (50, 9))
        assert a.cases == b.cases
        assert case_list(6, (50, 9)) == case_list(6, (50, 9))
        assert case_list(6, (50, 9)) != case_list(6, (50, 10))

    def test_cases_sorted(self):
        pairs, _, _ = case_list(5, (200, 3))
        assert pairs == sorted(pairs)

    def test_dense_capacity(self):
        with pytest.raises(CapacityError):
            run_suite(4, "dense")

    def test_failures_recorded(self, monkeypatch):
        def wrong(circuit, layout, x, y, mode, engine):
            return MultiplyResult(x * y + (x == 1 and y == 1), 1.0, mode, "stub")

        monkeypatch.setattr(verify, "simulate_product_circuit", wrong)
        r = run_suite(2, "hybrid")
        assert not r.passed
        assert [(f.x, f.y, f.expected, f.got) for f in r.failures] == [(1, 1, 1, 2)]

    def test_low_probability_is_failure(self, monkeypatch):
        monkeypatch.setattr(verify, "simulate_product_circuit",
                            lambda c, l, x, y, m, e: MultiplyResult(x * y, 0.9, m, "stub"))
        assert not run_suite(1, "hybrid").passed

    def test_report_json(self):
        r = run_suite(2, "hybrid")
        d = json.loads(r.to_json(include_cases=True))
        for key in ("n", "mode", "cases_run", "failures", "metrics_proposed", "metrics_baseline",
                    "elapsed", "seed", "baseline_footnote", "qft_reduction", "passed"):
            assert key in d
        assert d["metrics_baseline"]["qft_blocks"] == 2 and d["metrics_proposed"]["qft_blocks"] == 1
        assert len(d["cases"]) == 16
