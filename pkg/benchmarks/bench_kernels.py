"""Benchmark the numba kernels against the pure-numpy fallback.

Trains the two tree models on the bundled synthetic corpus with both
backends and reports wall time per fit. Numba timings exclude the first
warmup fit so JIT compilation does not distort the comparison.

Run from the repository root:

    python benchmarks/bench_kernels.py [--per-class 100] [--repeats 3]
"""

import argparse
import time

from refdoc import pipeline
from refdoc.classifiers import ModelConfig
from refdoc.kernels import HAVE_NUMBA
from refdoc.synthetic import generate_corpus


def time_fit(dataset, config, backend, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        pipeline.fit(dataset, config, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--per-class", type=int, default=100)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    dataset = generate_corpus(seed=0, per_class=args.per_class)
    print(f"corpus: {len(dataset)} messages "
          f"({args.per_class} per class), best of {args.repeats}")
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    if not HAVE_NUMBA:
        print("numba not installed; benchmarking the numpy path only")

    header = f"{'model':<6}" + "".join(f"{b:>12}" for b in backends)
    print(header)
    print("-" * len(header))
    for algo in ("gbt", "rf"):
        config = ModelConfig(algorithm=algo)
        times = {}
        for backend in backends:
            if backend == "numba":
                pipeline.fit(dataset, config, backend=backend)  # JIT warmup
            times[backend] = time_fit(dataset, config, backend, args.repeats)
        row = f"{algo:<6}" + "".join(f"{times[b]:>11.2f}s" for b in backends)
        if len(backends) == 2:
            row += f"   ({times['numpy'] / times['numba']:.1f}x)"
        print(row)


if __name__ == "__main__":
    main()
