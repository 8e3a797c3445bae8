"""Compiled core versus the pure-Python fallback on the three hot loops.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import timeit

import numpy as np
from scipy.sparse import random as sprandom

from isocompare import _fallback

try:
    from isocompare import _core
except ImportError:
    _core = None


def workloads(rng):
    t = np.sort(rng.uniform(0.1, 2.5, 400))
    s, c, phi = np.sin(t), np.cos(t), np.sin(2 * t) + 0.01 * rng.normal(size=t.size)
    queries = rng.normal(size=(2000, 3))
    cloud = rng.normal(size=(4000, 3))
    g = sprandom(3000, 3000, density=0.002, random_state=5, format="csr")
    g = (g + g.T).tocsr()
    indptr, indices = g.indptr.astype(np.int64), g.indices.astype(np.int64)
    sources, offsets = np.array([0, 11, 503], dtype=np.int64), np.zeros(3)
    return {
        "chord_scan (400 nodes)": lambda m: m.chord_scan(s, c, phi, 1.0, 1e-14),
        "nearest_points (2000 x 4000)": lambda m: m.nearest_points(queries, cloud, 0),
        "graph_dijkstra (3000 vertices)": lambda m: m.graph_dijkstra(indptr, indices, g.data, sources, offsets),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _core is None:
        print("compiled core not available; only the fallback is timed")
    print(f"{'kernel':32s} {'cython [s]':>12s} {'python [s]':>12s} {'speed-up':>9s}")
    for name, fn in workloads(np.random.default_rng(0)).items():
        slow = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat))
        if _core is None:
            print(f"{name:32s} {'-':>12s} {slow:12.4f} {'-':>9s}")
            continue
        fast = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat))
        print(f"{name:32s} {fast:12.4f} {slow:12.4f} {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
