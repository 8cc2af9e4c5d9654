"""Compare the compiled and pure-Python echelon kernels.

Two workloads:

* ``dh``: the block systems the d_H potential solver actually builds while
  inverting random total divergences (captured by wrapping
  ``linalg.solve_rational``);
* ``dense``: random dense integer matrices of a few sizes, small entries
  (the int64 fast path) and 40-digit entries (the object fallback).

Usage: python benchmarks/bench_echelon.py [--repeat N] [--seed S]
"""

import argparse
import random
import statistics
import time

from varcalc import linalg
from varcalc._echelon_py import fraction_free_echelon as py_kernel
from varcalc.forms import horizontal_d
from varcalc.inverse import find_potential
from varcalc.jetalg import Bundle
from varcalc.samples import random_form

try:
    from varcalc._echelon import fraction_free_echelon as cy_kernel
except ImportError:
    cy_kernel = None


def capture_dh_systems(seed, count=40):
    """Augmented integer matrices from real potential searches."""
    rng = random.Random(seed)
    systems = []
    original = linalg.solve_rational

    def spy(matrix, rhs, kernel=None):
        rows = [linalg._integral_row(list(r) + [b]) for r, b in zip(matrix, rhs)]
        if rows:
            systems.append(rows)
        return original(matrix, rhs, kernel)

    linalg.solve_rational = spy
    try:
        made = 0
        while made < count:
            b = Bundle(rng.randint(1, 2), rng.randint(1, 2))
            xi = random_form(rng, b, (rng.randint(0, 1), b.base_dim - 1), max_order=3, max_degree=2)
            L = horizontal_d(xi)
            if L:
                find_potential(L)
                made += 1
    finally:
        linalg.solve_rational = original
    return systems


def dense_systems(seed, size, digits, count):
    rng = random.Random(seed)
    hi = 10 ** digits
    return [[[rng.randint(-hi, hi) for _ in range(size + 1)] for _ in range(size)] for _ in range(count)]


def time_kernel(kernel, systems, repeat):
    samples = []
    for _ in range(repeat):
        copies = [[list(r) for r in rows] for rows in systems]
        start = time.perf_counter()
        for rows in copies:
            kernel(rows, len(rows[0]))
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    workloads = [("dh blocks", capture_dh_systems(args.seed))]
    for size in (8, 24, 48):
        workloads.append((f"dense {size}x{size + 1} small", dense_systems(args.seed, size, 1, 20)))
    workloads.append(("dense 24x25 40-digit", dense_systems(args.seed, 24, 40, 10)))

    print(f"compiled kernel: {'available' if cy_kernel else 'NOT BUILT'}")
    print(f"{'workload':<26}{'systems':>8}{'max rows':>9}{'python ms':>11}{'cython ms':>11}{'speedup':>9}")
    for name, systems in workloads:
        py_best, _ = time_kernel(py_kernel, systems, args.repeat)
        rows = max(len(s) for s in systems)
        if cy_kernel is not None:
            cy_best, _ = time_kernel(cy_kernel, systems, args.repeat)
            for s in systems:  # both kernels must agree
                a, b = [list(r) for r in s], [list(r) for r in s]
                assert py_kernel(a, len(s[0])) == cy_kernel(b, len(s[0])) and a == b
            cy_ms, speed = f"{cy_best * 1e3:11.2f}", f"{py_best / cy_best:8.1f}x"
        else:
            cy_ms, speed = f"{'-':>11}", f"{'-':>9}"
        print(f"{name:<26}{len(systems):>8}{rows:>9}{py_best * 1e3:11.2f}{cy_ms}{speed}")


if __name__ == "__main__":
    main()
