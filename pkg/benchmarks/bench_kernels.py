"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--qubits 22] [--repeat 5]
"""
import argparse
import time

import numpy as np

from qmul import sim
from qmul.arith import simulate_multiply
from qmul.circuit import cphase, h, swap, toffoli, x


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_gates(m, repeat):
    rng = np.random.default_rng(0)
    amps = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    state = sim.from_amplitudes(amps / np.linalg.norm(amps))
    gates = {
        "h(0)": h(0),
        f"h({m // 2})": h(m // 2),
        f"h({m - 1})": h(m - 1),
        "x(3)": x(3),
        "cp(1,5)": cphase(1, 5, 3),
        "swap(2,9)": swap(2, 9),
        "ccx(0,4,8)": toffoli(0, 4, 8),
    }
    return {name: _best(lambda g=g: sim.apply(state, g), repeat) for name, g in gates.items()}


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--qubits", type=int, default=22)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()

    backends = []
    for name in ("cython", "python"):
        try:
            sim.use_backend(name)
            backends.append(name)
        except ImportError:
            print(f"{name} backend unavailable, skipped")

    rows = {}
    for name in backends:
        sim.use_backend(name)
        rows[name] = bench_gates(args.qubits, args.repeat)
        simulate_multiply(1, 1, 3, "dense")
        rows[name]["multiply n=3 dense"] = _best(lambda: simulate_multiply(7, 5, 3, "dense"), 3)

    names = list(next(iter(rows.values())))
    print(f"{'operation':<20}" + "".join(f"{b:>12}" for b in backends)
          + ("     speedup" if len(backends) == 2 else ""))
    for op in names:
        cells = "".join(f"{rows[b][op] * 1e3:>10.2f}ms" for b in backends)
        extra = f"{rows['python'][op] / rows['cython'][op]:>11.1f}x" if len(backends) == 2 else ""
        print(f"{op:<20}{cells}{extra}")


if __name__ == "__main__":
    main()
