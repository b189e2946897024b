"""Timing comparison of the numpy and numba kernel paths.

Runs each hot kernel on both backends (when numba is importable) and prints
a small table with best-of-N wall times and the speedup.  The numbers are
indicative only; sizes are chosen so a run finishes in seconds.

    python3 benchmarks/bench_kernels.py --size 1000000 --repeats 5
"""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from streamuniq import _kernels
from streamuniq._kernels import (KIND_CLASSICAL, f_classical, prefix_moments_numpy,
                                 vorticity_grid_numpy)


@dataclass
class Timing:
    name: str
    numpy_ms: float
    numba_ms: float | None

    @property
    def speedup(self) -> float | None:
        if self.numba_ms is None or self.numba_ms == 0.0:
            return None
        return self.numpy_ms / self.numba_ms


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1.0e3


def bench_vorticity(size: int, repeats: int) -> Timing:
    rng = np.random.default_rng(0)
    psi = rng.uniform(-0.25, 0.25, size)
    numpy_ms = best_of(lambda: vorticity_grid_numpy(KIND_CLASSICAL, 0.0, 0.0, psi),
                       repeats)
    numba_ms = None
    if _kernels.HAS_NUMBA:
        _kernels.vorticity_grid_numba(KIND_CLASSICAL, 0.0, 0.0, psi[:16])  # compile
        numba_ms = best_of(
            lambda: _kernels.vorticity_grid_numba(KIND_CLASSICAL, 0.0, 0.0, psi),
            repeats)
    return Timing("vorticity grid", numpy_ms, numba_ms)


def bench_prefix_moments(size: int, repeats: int) -> Timing:
    nodes = np.linspace(1.0, 2.0, size)
    lw = np.log(nodes)
    rng = np.random.default_rng(1)
    values = rng.normal(size=size)
    numpy_ms = best_of(lambda: prefix_moments_numpy(nodes, lw, values), repeats)
    numba_ms = None
    if _kernels.HAS_NUMBA:
        _kernels.prefix_moments_numba(nodes[:16], lw[:16], values[:16])  # compile
        numba_ms = best_of(lambda: _kernels.prefix_moments_numba(nodes, lw, values),
                           repeats)
    return Timing("prefix moments", numpy_ms, numba_ms)


def bench_rk_core(repeats: int, rel_tol: float = 1.0e-12) -> Timing:
    nodes = np.linspace(1.0, 2.0, 513)

    def run(core, f):
        psi_out = np.empty_like(nodes)
        u_out = np.empty_like(nodes)
        core(f, 0.0, 0.0, 1.0, 2.0, rel_tol, 1.0e-16,
             1.0e-4, 1.0e-14, 1.0, nodes, psi_out, u_out)

    numpy_ms = best_of(lambda: run(_kernels.rk_core_python, f_classical), repeats)
    numba_ms = None
    if _kernels.HAS_NUMBA:
        run(_kernels.rk_core_numba, _kernels.f_classical_numba)  # compile
        numba_ms = best_of(
            lambda: run(_kernels.rk_core_numba, _kernels.f_classical_numba), repeats)
    return Timing("adaptive rk solve", numpy_ms, numba_ms)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=1_000_000,
                        help="array length for the grid kernels")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats; the best run is reported")
    args = parser.parse_args()

    if not _kernels.HAS_NUMBA:
        print("numba is not importable; only the numpy path is timed\n")

    rows = [
        bench_vorticity(args.size, args.repeats),
        bench_prefix_moments(args.size, args.repeats),
        bench_rk_core(args.repeats),
    ]

    header = f"{'kernel':<20} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for row in rows:
        numba_s = f"{row.numba_ms:12.3f}" if row.numba_ms is not None else f"{'-':>12}"
        speed_s = f"{row.speedup:8.1f}x" if row.speedup is not None else f"{'-':>9}"
        print(f"{row.name:<20} {row.numpy_ms:12.3f} {numba_s} {speed_s}")


if __name__ == "__main__":
    main()
