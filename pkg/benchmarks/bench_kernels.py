"""Compare the numba and numpy kernel backends.

Times the matrix-free polynomial filter and the local-variation map on a
random graph. Both backends are timed in the same process; numba is warmed
up once before timing so compilation is excluded.

    python3 benchmarks/bench_kernels.py --N 2000 --T 64 --K 4 --L 4
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from jft import _kernels
from jft.filters import PolynomialFilter, apply_polynomial_filter
from jft.graph import Graph
from jft.variation import local_variation_map


def random_graph(n: int, avg_degree: float, rng: np.random.Generator) -> Graph:
    m = int(n * avg_degree / 2)
    i = rng.integers(0, n, size=3 * m)
    j = rng.integers(0, n, size=3 * m)
    pairs = {(min(a, b), max(a, b)) for a, b in zip(i.tolist(), j.tolist()) if a != b}
    edges = sorted(pairs)[:m]
    return Graph(n, tuple((a, b, 1.0) for a, b in edges))


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--N", type=int, default=2000)
    p.add_argument("--T", type=int, default=64)
    p.add_argument("--K", type=int, default=4)
    p.add_argument("--L", type=int, default=4)
    p.add_argument("--degree", type=float, default=8.0)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    g = random_graph(args.N, args.degree, rng)
    X = rng.standard_normal((args.N, args.T))
    pf = PolynomialFilter(rng.standard_normal((args.K + 1, args.L + 1)))
    backends = [b for b in _kernels.BACKENDS if b == "numpy" or _kernels.HAVE_NUMBA]

    print(f"N={args.N} M={g.n_edges} T={args.T} K={args.K} L={args.L}")
    print("kernel,backend,best_seconds")
    results = {}
    for name, fn in (
        ("polynomial_filter", lambda b: apply_polynomial_filter(X, pf, g, backend=b)),
        ("local_variation", lambda b: local_variation_map(X, g, backend=b)),
    ):
        for b in backends:
            results[(name, b)] = fn(b)  # warm-up and result capture
            best = min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat))
            print(f"{name},{b},{best:.6f}")
        if len(backends) == 2:
            diff = np.abs(results[(name, "numba")] - results[(name, "numpy")]).max()
            print(f"# {name}: max backend difference {diff:.3e}")


if __name__ == "__main__":
    main()
