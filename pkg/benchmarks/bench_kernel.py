"""Time the DL concept kernel: compiled vs numpy fallback.

    python benchmarks/bench_kernel.py [--bound 3] [--repeat 5]

Both backends evaluate the same concepts over every interpretation of a
small signature; their outputs are compared before timing.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from relaxrev.logics.dl import kernel
from relaxrev.logics.dl.semantics import DLSystem
from relaxrev.logics.dl.syntax import DLSignature, parse_concept

CONCEPTS = [
    "A & B",
    "some r. A",
    "all r. (A | ~B)",
    "some r. (A & all r. B) | ~A",
    "all r. some r. (A & ~B) & some r_top. B",
]


def run(bound: int, repeat: int) -> list[dict]:
    sig = DLSignature(("A", "B"), ("r",))
    system = DLSystem(sig, bound, ceiling=1 << 26)
    blocks = system._blocks
    rows = []
    for text in CONCEPTS:
        prog = kernel.compile_concept(parse_concept(text), system._cidx, system._ridx)
        backends = ["numpy"] + (["cython"] if kernel.BACKEND == "cython" else [])
        results, times = {}, {}
        for name in backends:
            outs = [kernel.eval_program(prog, b.n, b.nc, b.nr, name) for b in blocks]
            results[name] = outs
            samples = []
            for _ in range(repeat):
                t0 = time.perf_counter()
                for b in blocks:
                    kernel.eval_program(prog, b.n, b.nc, b.nr, name)
                samples.append(time.perf_counter() - t0)
            times[name] = statistics.median(samples)
        if "cython" in results:
            for a, b in zip(results["numpy"], results["cython"]):
                if not np.array_equal(a, b):
                    raise SystemExit(f"backends disagree on {text!r}")
        rows.append({"concept": text, **times})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sig = DLSignature(("A", "B"), ("r",))
    print(f"interpretations: {DLSystem(sig, args.bound, ceiling=1 << 26).size}  compiled kernel: {kernel.BACKEND}")
    print(f"{'concept':45} {'numpy ms':>10} {'cython ms':>10} {'speedup':>8}")
    for row in run(args.bound, args.repeat):
        np_ms = row["numpy"] * 1e3
        cy = row.get("cython")
        cy_ms = f"{cy * 1e3:10.3f}" if cy is not None else f"{'n/a':>10}"
        speed = f"{row['numpy'] / cy:8.1f}" if cy else f"{'':>8}"
        print(f"{row['concept']:45} {np_ms:10.3f} {cy_ms} {speed}")


if __name__ == "__main__":
    main()
