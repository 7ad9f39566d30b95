"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

from cubeforge import _kernels_py, kernels
from cubeforge.dispatcher import search_problem
from cubeforge.even import construct_even


def workloads():
    for label, real in (("lines 21^3", construct_even(8, 5)), ("lines 60^3", construct_even(20, 20))):
        yield label, "line_duplicates", (real.cube, 50)
    for parts in ((2, 2, 1), (3, 1, 1), (2, 2, 1, 1)):
        fixed, allowed = search_problem(parts)
        n = sum(parts)
        yield f"search {','.join(map(str, parts))}", "search", (fixed.ravel().tolist(), allowed.ravel().tolist(), n, 10 ** 8)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    compiled = kernels._compiled
    if compiled is None:
        print("compiled extension not importable; only the fallback is timed")
    print(f"{'workload':<18} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for label, name, call_args in workloads():
        pure_fn = getattr(_kernels_py, name)
        pure = min(timeit.repeat(lambda: pure_fn(*call_args), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{label:<18} {pure:>10.2f} {'-':>12} {'-':>8}")
            continue
        fast_fn = getattr(compiled, name)
        fast = min(timeit.repeat(lambda: fast_fn(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:<18} {pure:>10.2f} {fast:>12.3f} {pure / fast:>7.0f}x")


if __name__ == "__main__":
    main()
