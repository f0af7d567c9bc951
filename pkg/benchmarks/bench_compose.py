"""Compare the compiled composition kernel with the pure-Python fallback.

Run with ``python benchmarks/bench_compose.py``.  The kernel is timed on
random matchings of growing size, then whole graph computations are
timed with and without QCOH_NO_NUMBA set.
"""

from __future__ import annotations

import argparse
import os
import timeit

import numpy as np

from qcoh import graphs
from qcoh.generate import gen_random_arrow


def random_matching(rng: np.random.Generator, size: int) -> np.ndarray:
    perm = rng.permutation(size)
    partner = np.empty(size, dtype=np.int64)
    partner[perm[0::2]] = perm[1::2]
    partner[perm[1::2]] = perm[0::2]
    return partner


def bench_kernel(sizes: list[int], repeat: int) -> None:
    rng = np.random.default_rng(0)
    jit = graphs._jit_kernel()
    print(f"{'occurrences':>11}  {'python ms':>10}  {'numba ms':>9}  {'speed-up':>8}")
    for n in sizes:
        fp = random_matching(rng, 2 * n)
        gp = random_matching(rng, 2 * n)
        args = (fp, n, n, gp, n)
        jit(*args)  # compile outside the timing
        py = min(timeit.repeat(lambda: graphs._python_kernel(*args), number=1, repeat=repeat))
        nb = min(timeit.repeat(lambda: jit(*args), number=1, repeat=repeat))
        print(f"{n:>11}  {py * 1e3:>10.3f}  {nb * 1e3:>9.3f}  {py / nb:>7.1f}x")


def bench_terms(count: int, budget: int) -> None:
    terms = [gen_random_arrow("qmpn-neg", budget, seed) for seed in range(count)]
    graphs.graph_of(terms[0])

    def run() -> None:
        for t in terms:
            graphs.graph_of(t)

    results = {}
    for label, flag in (("numba", ""), ("python", "1")):
        os.environ["QCOH_NO_NUMBA"] = flag
        results[label] = min(timeit.repeat(run, number=1, repeat=3))
    os.environ.pop("QCOH_NO_NUMBA", None)
    print(f"graph_of on {count} random terms (budget {budget}): "
          f"numba {results['numba']:.3f} s, python {results['python']:.3f} s")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--terms", type=int, default=300)
    p.add_argument("--budget", type=int, default=15)
    a = p.parse_args()
    bench_kernel([8, 64, 512, 4096, 32768], a.repeat)
    bench_terms(a.terms, a.budget)


if __name__ == "__main__":
    main()
