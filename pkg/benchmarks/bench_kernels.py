"""Time the compiled kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py [--types A4 B4 E6] [--triples 20000] [--repeat 3]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from liecert.chevalley import build_algebra
from liecert.kernels import _pure

try:
    from liecert.kernels import _ckernels
except ImportError:
    _ckernels = None


def _best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench(name: str, n_triples: int, repeat: int) -> list[tuple]:
    t = build_algebra(name).integer_table
    args = (t.offsets, t.cols, t.vals, t.dim)
    triples = np.random.default_rng(0).integers(0, t.dim, size=(n_triples, 3), dtype=np.int64)
    rows = []
    for label, call in (
        ("jacobi", lambda m: m.jacobi_violations(*args, triples)),
        ("killing", lambda m: m.killing_trace(*args)),
    ):
        py = _best(lambda: call(_pure), repeat)
        cy = _best(lambda: call(_ckernels), repeat) if _ckernels else float("nan")
        rows.append((name, t.dim, label, py, cy))
    return rows


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--types", nargs="+", default=["A4", "B4", "G2", "F4", "E6"])
    ap.add_argument("--triples", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels unavailable; timing the pure backend only")
    print(f"{'algebra':8s} {'dim':>4s} {'kernel':8s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name in args.types:
        for alg, dim, label, py, cy in bench(name, args.triples, args.repeat):
            speed = py / cy if cy == cy and cy > 0 else float("nan")
            print(f"{alg:8s} {dim:4d} {label:8s} {py:10.4f} {cy:10.4f} {speed:8.1f}x")


if __name__ == "__main__":
    main()
