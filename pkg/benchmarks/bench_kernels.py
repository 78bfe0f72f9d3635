"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 20000] [--m 6] [--repeat 3]

Both backends run on the same Holme-Kim style graph and their outputs are
checked for equality before any timing is reported.
"""
import argparse
import time

import numpy as np

from nbclique import kernels
from nbclique.graph import from_edges


def clustered_graph(n, m, seed):
    # preferential attachment where half the links close a triad
    rng = np.random.default_rng(seed)
    adj = [set(range(m)) - {v} for v in range(m)]
    targets = [v for v in range(m) for _ in range(m - 1)]
    for v in range(m, n):
        chosen = set()
        while len(chosen) < m:
            u = targets[rng.integers(len(targets))]
            chosen.add(u)
            if len(chosen) < m and adj[u] and rng.random() < 0.5:
                nb = sorted(adj[u] - chosen)
                if nb:
                    chosen.add(nb[rng.integers(len(nb))])
        adj.append(set(chosen))
        for u in chosen:
            adj[u].add(v)
            targets.extend((u, v))
    src = [v for v in range(n) for u in adj[v] if u > v]
    dst = [u for v in range(n) for u in adj[v] if u > v]
    return from_edges(np.array(src), np.array(dst), n=n)


def same(a, b):
    if isinstance(a, (tuple, list)):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def best_time(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20_000)
    ap.add_argument("--m", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = clustered_graph(args.n, args.m, args.seed)
    print(f"graph: n={g.n} m={g.m}")
    try:
        backends = {"python": kernels.get_backend("python"), "cython": kernels.get_backend("cython")}
    except ImportError:
        raise SystemExit("compiled kernels are not built; run pip install -e . --no-build-isolation")

    hub = int(np.argmax(g.degrees))
    seed_members = np.unique(np.concatenate([[hub], g.neighbors(hub)])).astype(np.int64)
    cases = {
        "triangle_counts": lambda k: k.triangle_counts(g.indptr, g.indices),
        "core_numbers": lambda k: k.core_numbers(g.indptr, g.indices),
        "peel_order": lambda k: k.peel_order(g.indptr, g.indices),
        "local_search": lambda k: k.local_search(g.indptr, g.indices, seed_members, 1, 3, 50),
    }

    print(f"{'kernel':<16} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, run in cases.items():
        py_out, py_t = best_time(lambda: run(backends["python"]), args.repeat)
        c_out, c_t = best_time(lambda: run(backends["cython"]), args.repeat)
        if not same(py_out, c_out):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<16} {py_t:>10.4f} {c_t:>10.4f} {py_t / c_t:>7.1f}x")


if __name__ == "__main__":
    main()
