"""Compare the compiled and pure-Python elimination kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the elimination routines on random matrices and full spectral
sequence runs on two fixtures, once per available backend.

At 32x48 the unimodular transforms of the tracked Smith form outgrow int64,
so the compiled kernel raises ``OverflowError`` and the work is redone on
Python ints; that row measures the fallback, not the C loop.
"""
import argparse
import timeit

import numpy as np

from icsskit import icss
from icsskit.fixtures import quadruple_planes, s_lines
from icsskit.intlin import available_backends, invariant_factors, kernel_basis, set_backend, smith_normal_form
from icsskit.multipt import multiple_point_family


def _matrices(size, count, seed):
    rng = np.random.default_rng(seed)
    # sparse-ish boundary-like matrices with small entries
    out = []
    for _ in range(count):
        M = rng.integers(-2, 3, size=(size, size + size // 2))
        M[rng.random(M.shape) < 0.7] = 0
        out.append(M.astype(object))
    return out


def _cases():
    cases = []
    for size in (8, 16, 32):
        mats = _matrices(size, 5, size)
        cases.append((f"snf {size}x{size + size // 2}", lambda mats=mats: [smith_normal_form(M) for M in mats]))
        cases.append((f"invariants {size}x{size + size // 2}", lambda mats=mats: [invariant_factors(M) for M in mats]))
        cases.append((f"kernel {size}x{size + size // 2}", lambda mats=mats: [kernel_basis(M) for M in mats]))
    for name, g in (("icss quadruple_planes", quadruple_planes()), ("icss s_lines_6", s_lines(6))):
        cases.append((name, lambda g=g: icss.run(multiple_point_family(g))))
    return cases


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    backends = available_backends()
    cases = _cases()
    rows = []
    for label, fn in cases:
        times = {}
        for b in backends:
            prev = set_backend(b)
            try:
                fn()
                times[b] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            finally:
                set_backend(prev)
        rows.append((label, times))
    header = f"{'case':28}" + "".join(f"{b + ' (ms)':>14}" for b in backends)
    if "c" in backends:
        header += f"{'speedup':>10}"
    print(header)
    for label, times in rows:
        line = f"{label:28}" + "".join(f"{times[b] * 1e3:14.2f}" for b in backends)
        if "c" in backends:
            line += f"{times['pure'] / times['c']:10.1f}x"
        print(line)
    if "c" not in backends:
        print("compiled kernels not built; only the pure-Python fallback was timed")


if __name__ == "__main__":
    main()
