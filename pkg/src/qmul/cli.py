"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or range error,
3 dense capacity exceeded, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import circuit as cir
from . import sim
from .arith import add_values, build_multiplier, simulate_multiply
from .errors import CapacityError, DomainError, StructuralError
from .qasm import to_qasm
from .verify import build_baseline_sequential, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY, EXIT_IO = 0, 1, 2, 3, 4


@dataclass
class CliConfig:
    command: str
    n: int | None = None
    x: int | None = None
    y: int | None = None
    bits: int | None = None
    values: list[int] = field(default_factory=list)
    t: int | None = None
    mode: str = "auto"
    format: str = "json"
    output: str | None = None
    seed: int = 0
    samples: int | None = None
    exhaustive: bool = False
    swaps: bool = False
    json: bool = False

    def validate(self) -> None:
        needs = {
            "multiply": ("n", "x", "y"),
            "add": ("bits",),
            "verify": ("n",),
            "metrics": ("n",),
            "emit": ("n",),
        }[self.command]
        for name in needs:
            if getattr(self, name) is None:
                raise DomainError(f"--{name} is required for {self.command}")
        if self.command == "add" and not self.values:
            raise DomainError("--values needs at least one value")
        if self.command == "verify" and self.exhaustive and self.samples is not None:
            raise DomainError("use either --exhaustive or --samples, not both")


def _values(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmul", description="QFT-adder quantum multiplier toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    modes = ("auto", "dense", "hybrid")

    def common(sp):
        sp.add_argument("--swaps", action="store_true", help="emit explicit QFT output swaps")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    m = sub.add_parser("multiply", help="simulate x * y on the n-bit multiplier")
    m.add_argument("--n", type=int)
    m.add_argument("--x", type=int)
    m.add_argument("--y", type=int)
    m.add_argument("--mode", choices=modes, default="auto")
    common(m)

    a = sub.add_parser("add", help="sum values with the single-pass QFT adder")
    a.add_argument("--bits", type=int)
    a.add_argument("--values", type=_values, default=[])
    a.add_argument("--t", type=int, help="carry qubits (default: ceil(log2 count))")
    a.add_argument("--mode", choices=modes, default="auto")
    common(a)

    v = sub.add_parser("verify", help="check products against the classical oracle")
    v.add_argument("--n", type=int)
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--mode", choices=modes, default="auto")
    v.add_argument("--output", "--report", dest="output", help="write the JSON report here")
    common(v)

    mt = sub.add_parser("metrics", help="gate counts of proposed vs sequential baseline")
    mt.add_argument("--n", type=int)
    common(mt)

    e = sub.add_parser("emit", help="write the multiplier circuit")
    e.add_argument("--n", type=int)
    e.add_argument("--format", choices=("json", "qasm"), default="json")
    e.add_argument("--output", help="file path (default: stdout)")
    common(e)
    return p


def _resolve_mode(mode: str, n: int) -> str:
    if mode != "auto":
        return mode
    return "dense" if 2 * n * n + n + 1 <= sim.dense_limit() else "hybrid"


def _metrics_table(rows: list[tuple[str, cir.CircuitMetrics]]) -> str:
    kinds = [k.value for k in cir.GateKind]
    header = ["design"] + kinds + ["total", "depth", "qft", "iqft", "qubits"]
    body = [
        [name] + [str(m.counts[k]) for k in kinds]
        + [str(m.total_gates), str(m.depth), str(m.qft_blocks), str(m.iqft_blocks), str(m.qubit_count)]
        for name, m in rows
    ]
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    fmt = lambda r: "  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths)))
    return "\n".join([fmt(header)] + [fmt(r) for r in body])


def cmd_multiply(cfg: CliConfig) -> int:
    mode = _resolve_mode(cfg.mode, cfg.n)
    r = simulate_multiply(cfg.x, cfg.y, cfg.n, mode, swaps=cfg.swaps)
    metrics = cir.compute_metrics(build_multiplier(cfg.n, cfg.swaps).circuit)
    if cfg.json:
        print(json.dumps({"x": cfg.x, "y": cfg.y, "n": cfg.n, "product": r.product,
                          "probability": r.probability, "mode": r.mode, "engine": r.engine,
                          "metrics": metrics.to_dict()}))
    else:
        print(f"{cfg.x} × {cfg.y} = {r.product} (p={r.probability:.6f})")
        print(_metrics_table([("multiplier", metrics)]))
    return EXIT_OK


def cmd_add(cfg: CliConfig) -> int:
    r = add_values(cfg.values, cfg.bits, cfg.t, cfg.mode, swaps=cfg.swaps)
    m = cir.compute_metrics(r.circuit)
    if cfg.json:
        print(json.dumps({"values": cfg.values, "sum": r.total, "probability": r.probability,
                          "width": r.width, "t": r.carry, "qft_blocks": m.qft_blocks,
                          "iqft_blocks": m.iqft_blocks, "metrics": m.to_dict()}))
    else:
        expr = " + ".join(map(str, cfg.values))
        print(f"{expr} = {r.total} (mod 2^{r.width}, t={r.carry}, p={r.probability:.6f})")
        print(f"qft_blocks={m.qft_blocks} iqft_blocks={m.iqft_blocks}")
    return EXIT_OK


def cmd_verify(cfg: CliConfig) -> int:
    mode = _resolve_mode(cfg.mode, cfg.n)
    if cfg.samples is not None:
        sampling = (cfg.samples, cfg.seed)
    else:
        sampling = "exhaustive"
    report = run_suite(cfg.n, mode, sampling, swaps=cfg.swaps)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(report.to_json(include_cases=True))
    if cfg.json:
        print(report.to_json())
    else:
        ok = report.cases_run - len(report.failures)
        status = "PASS" if report.passed else "FAIL"
        print(f"{status} n={cfg.n} mode={mode} {report.sampling}: {ok}/{report.cases_run} "
              f"(min p={report.min_probability:.12f}, {report.elapsed:.2f}s)")
        for f in report.failures[:10]:
            print(f"  {f.x} × {f.y}: expected {f.expected}, got {f.got} (p={f.probability:.6f})")
        print(f"qft blocks: proposed {report.metrics_proposed.qft_blocks}, "
              f"baseline {report.metrics_baseline.qft_blocks} (reduction {report.qft_reduction})")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_metrics(cfg: CliConfig) -> int:
    rows = []
    for swaps in (False, True):
        tag = " +swaps" if swaps else ""
        rows.append((f"proposed{tag}", cir.compute_metrics(build_multiplier(cfg.n, swaps).circuit)))
        rows.append((f"baseline{tag}", build_baseline_sequential(cfg.n, swaps).metrics))
    if cfg.json:
        print(json.dumps({name: m.to_dict() for name, m in rows}, indent=2))
    else:
        print(_metrics_table(rows))
        print(f"qft/iqft reduction: {rows[1][1].qft_blocks - rows[0][1].qft_blocks}")
    return EXIT_OK


def cmd_emit(cfg: CliConfig) -> int:
    c = build_multiplier(cfg.n, cfg.swaps).circuit
    text = cir.dumps(c, indent=1) + "\n" if cfg.format == "json" else to_qasm(c)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "multiply": cmd_multiply,
    "add": cmd_add,
    "verify": cmd_verify,
    "metrics": cmd_metrics,
    "emit": cmd_emit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig(**{k: v for k, v in vars(args).items() if k in CliConfig.__dataclass_fields__})
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, StructuralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
