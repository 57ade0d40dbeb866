"""Compare the compiled elimination kernel against the pure-Python one.

Run:  python benchmarks/bench_kernel.py [--repeat N]

Kernel workloads are random low-rank integer matrices of the shapes that show
up in Cox-quotient computations and a real catalecticant. The end-to-end
workload runs one verification trial per backend in a subprocess, since the
backend is fixed at import time.
"""

from __future__ import annotations

import argparse
import random
import os
import statistics
import subprocess
import sys
import time

from apw import _kernel_py
from apw.linalg import integer_row
from apw.poly import catalecticant, parse_poly

try:
    from apw import _kernel as _kernel_c
except ImportError:  # extension not built
    _kernel_c = None


def low_rank(rng: random.Random, rows: int, cols: int, r: int, bound: int = 9) -> list[list[int]]:
    left = [[rng.randint(-bound, bound) for _ in range(r)] for _ in range(rows)]
    right = [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(r)]
    return [[sum(a * b for a, b in zip(lr, col)) for col in zip(*right)] for lr in left]


def workloads(seed: int = 0):
    rng = random.Random(seed)
    for rows, cols, r in [(30, 40, 20), (66, 120, 50), (120, 200, 90)]:
        yield f"random {rows}x{cols} rank {r}", low_rank(rng, rows, cols, r), cols
    f = parse_poly("+".join(f"x{i}^6" for i in range(5)) + "+x0*x1*x2*x3*x4^2")
    cat = catalecticant(f, 3)
    yield f"catalecticant {cat.rows}x{cat.cols}", [integer_row(r) for r in cat.row_list()], cat.cols


def time_call(fn, rows, ncols, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        copy = [list(r) for r in rows]
        t = time.perf_counter()
        fn(copy, ncols)
        samples.append(time.perf_counter() - t)
    return statistics.median(samples)


END_TO_END = [
    ["verify", "scroll-fermat", "--s", "3", "--a1", "2", "--a2", "1"],
    ["verify", "plane-waring", "--m", "2", "--s", "2"],
]


def time_cli(argv, backend: str) -> float:
    env = dict(os.environ, APW_KERNEL=backend)
    t = time.perf_counter()
    subprocess.run([sys.executable, "-m", "apw.cli", *argv], env=env, check=True, capture_output=True)
    return time.perf_counter() - t


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = [("python", _kernel_py)] + ([("cython", _kernel_c)] if _kernel_c else [])
    if _kernel_c is None:
        print("compiled kernel not available; timing the Python fallback only")
    print(f"{'workload':<28}{'op':<6}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for label, rows, ncols in workloads():
        for op in ("rank", "rref"):
            times = []
            results = []
            for _, mod in backends:
                fn = mod.rank_int if op == "rank" else mod.rref_int
                times.append(time_call(fn, rows, ncols, args.repeat))
                results.append(fn([list(r) for r in rows], ncols))
            assert all(r == results[0] for r in results), "backends disagree"
            speed = f"{times[0] / times[-1]:.1f}x" if len(times) > 1 else "-"
            print(f"{label:<28}{op:<6}" + "".join(f"{t * 1000:>10.2f}ms" for t in times) + f"{speed:>10}")
    if _kernel_c is not None:
        print()
        for cmd in END_TO_END:
            py, cy = time_cli(cmd, "python"), time_cli(cmd, "cython")
            print(f"{' '.join(cmd[1:3]) + ' ' + ' '.join(cmd[3:]):<52}{py:>8.2f}s{cy:>8.2f}s{py / cy:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
