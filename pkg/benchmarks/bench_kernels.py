"""Compare the compiled and numpy kernel backends.

Times each kernel on sorted inputs and a full ``evaluate_pair`` on fresh
score sets (sorting included), best of ``--repeat`` runs.

    python3 benchmarks/bench_kernels.py --sizes 10000 100000 1000000
"""

import argparse
import time

import numpy as np

from oodeval import kernels
from oodeval.protocol import evaluate_pair
from oodeval.scores import Kind, validate_scoreset


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(sizes, repeat, seed):
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        # rounding keeps plenty of ties, as real detector scores often have
        a = np.sort(np.round(rng.beta(2, 5, n), 4))
        b = np.sort(np.round(rng.beta(5, 2, n), 4))
        grid = kernels.merge_groups(a, b)[0]
        cases = {
            "merge_groups": lambda: kernels.merge_groups(a, b),
            "count_below": lambda: kernels.count_below(a, grid, True),
            "mann_whitney_u2": lambda: kernels.mann_whitney_u2(a, b),
            "evaluate_pair": lambda: evaluate_pair(
                validate_scoreset(a[::-1].copy(), "id"), validate_scoreset(b[::-1].copy(), "ood", Kind.OOD)
            ),
        }
        for name, fn in cases.items():
            timings = {}
            for backend in sorted(kernels.BACKENDS):
                kernels.use_backend(backend)
                timings[backend] = best_of(fn, repeat)
            rows.append((n, name, timings))
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    previous = kernels.backend_name()
    backends = sorted(kernels.BACKENDS)
    try:
        rows = run(args.sizes, args.repeat, args.seed)
    finally:
        kernels.use_backend(previous)
    header = f"{'n':>9}  {'kernel':<16}" + "".join(f"{b + ' ms':>14}" for b in backends)
    if "compiled" in backends:
        header += f"{'speedup':>10}"
    print(header)
    for n, name, t in rows:
        line = f"{n:>9}  {name:<16}" + "".join(f"{1e3 * t[b]:>14.2f}" for b in backends)
        if "compiled" in t:
            line += f"{t['python'] / t['compiled']:>9.1f}x"
        print(line)
    if "compiled" not in backends:
        print("compiled extension not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
