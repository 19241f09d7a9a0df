"""Timing of the compiled kernels against the numpy fallback.

Run ``python benchmarks/bench_kernels.py [--sizes 256 512 1024] [--repeat 5]``.
Prints the best-of-``repeat`` wall time per kernel and backend, the speedup,
and the largest difference between the two results.
"""

import argparse
import timeit

import numpy as np

from gptasym import _kernels_py
from gptasym.geometry import ShapeSpec, discretize

try:
    from gptasym import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None


def _cases(M: int):
    src = discretize(ShapeSpec("kite"), M)
    tgt = discretize(ShapeSpec("ellipse", a=3.0, b=2.5), M)
    return {
        "kstar_matrix": (src.nodes, src.normals, src.curvature, src.weights),
        "single_layer_matrix": (tgt.nodes, src.nodes, src.weights),
        "single_layer_normal_matrix": (tgt.nodes, tgt.normals, src.nodes, src.weights),
        "double_layer_matrix": (tgt.nodes, src.nodes, src.normals, src.weights),
        "double_layer_normal_matrix": (tgt.nodes, tgt.normals, src.nodes, src.normals, src.weights),
    }


def _best(fn, args, repeat: int) -> float:
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def run(sizes, repeat: int) -> list[dict]:
    rows = []
    for M in sizes:
        for name, args in _cases(M).items():
            args = tuple(np.ascontiguousarray(a) for a in args)
            t_py = _best(getattr(_kernels_py, name), args, repeat)
            row = {"M": M, "kernel": name, "numpy_s": t_py}
            if compiled is not None:
                fn = getattr(compiled, name)
                row["cython_s"] = _best(fn, args, repeat)
                row["speedup"] = t_py / row["cython_s"]
                row["max_diff"] = float(np.abs(fn(*args) - getattr(_kernels_py, name)(*args)).max())
            rows.append(row)
    return rows


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rows = run(args.sizes, args.repeat)
    if compiled is None:
        print("compiled extension not built; numpy timings only")
    print(f"{'M':>6} {'kernel':<28} {'numpy [ms]':>11} {'cython [ms]':>12} {'speedup':>8} {'max diff':>10}")
    for r in rows:
        cy = f"{1e3 * r['cython_s']:12.2f} {r['speedup']:8.1f} {r['max_diff']:10.1e}" if "cython_s" in r else ""
        print(f"{r['M']:6d} {r['kernel']:<28} {1e3 * r['numpy_s']:11.2f} {cy}")


if __name__ == "__main__":
    main()
