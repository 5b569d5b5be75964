"""Benchmark: compiled vs pure-Python semigroup enumeration kernels.

Runs the Hilbert-function dynamic program on the acceptance-sized
workloads with both backends and prints a comparison table.

    python3 benchmarks/bench_kernels.py [--max-degree 500]
"""

import argparse
import time
from fractions import Fraction

from okounkov import _speedups_py
from okounkov.semigroups import GradedSemigroup


def backends():
    out = [("python", _speedups_py)]
    try:
        from okounkov import _speedups

        out.insert(0, ("compiled", _speedups))
    except ImportError:
        print("note: compiled backend unavailable, benchmarking python only")
    return out


def workloads(max_degree):
    F = Fraction
    yield "segment <(1,0),(1,1)>", [(1, (0,)), (1, (1,))], max_degree
    yield "simplex rank 3", [(1, (0, 0)), (1, (1, 0)), (1, (0, 1))], max_degree
    yield (
        "nested family K=5",
        [(1, (F(1, 32) * k,)) for k in (0, 1, 2, 4, 8, 16, 32)],
        min(max_degree, 200),
    )
    yield (
        "square rank 3",
        [(1, (0, 0)), (1, (1, 0)), (1, (0, 1)), (1, (1, 1))],
        max_degree,
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-degree", type=int, default=500)
    args = parser.parse_args()

    print(f"{'workload':<24} {'backend':<10} {'H(D)':>10} {'seconds':>9}")
    for name, gens, max_degree in workloads(args.max_degree):
        sigma = GradedSemigroup.from_generators(gens)
        pack = sigma._packing
        degs = [g.degree for g in sigma.generators]
        codes = [pack.encode(g, max_degree) for g in sigma.generators]
        window = max(degs)
        baseline = None
        for label, backend in backends():
            started = time.perf_counter()
            counts = backend.grow_counts(degs, codes, max_degree, window)
            elapsed = time.perf_counter() - started
            speed = ""
            if baseline is None:
                baseline = (counts, elapsed, label)
            else:
                assert counts == baseline[0], "backends disagree"
                if baseline[1]:
                    speed = f"  ({elapsed / baseline[1]:.1f}x {baseline[2]} time)"
            print(
                f"{name:<24} {label:<10} {counts[max_degree]:>10} "
                f"{elapsed:>9.3f}{speed}"
            )
        print()


if __name__ == "__main__":
    main()
