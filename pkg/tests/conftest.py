import itertools
import os
from pathlib import Path

import numpy as np
import pytest

from nbclique.graph import from_edges, read_edge_list

DATA_DIRS = [Path(p) for p in os.environ.get("NBCLIQUE_DATA", "").split(os.pathsep) if p]
DATA_DIRS.append(Path(__file__).parent / "data")

DATASET_FILES = {
    "facebook": ("facebook_combined.txt", "facebook_combined.txt.gz"),
    "hepph": ("ca-HepPh.txt", "ca-HepPh.txt.gz"),
    "astroph": ("ca-AstroPh.txt", "ca-AstroPh.txt.gz"),
}

_graph_cache = {}
ACCEPTANCE_LINES = []


def dataset_path(name):
    for d in DATA_DIRS:
        for fname in DATASET_FILES[name]:
            p = d / fname
            if p.exists():
                return p
    return None


def load_dataset(name):
    """Graph for a real dataset, or None if its file is not available."""
    if name not in _graph_cache:
        p = dataset_path(name)
        _graph_cache[name] = read_edge_list(p) if p else None
    return _graph_cache[name]


def er_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return from_edges(iu[keep], ju[keep], n=n)


def random_graphs(count, n_range=(5, 64), p_range=(0.1, 0.5), seed=0):
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p = float(rng.uniform(*p_range))
        yield er_graph(n, p, seed * 100_003 + i)


def graph_of(edges, n=None):
    edges = list(edges)
    src = [u for u, _ in edges]
    dst = [v for _, v in edges]
    return from_edges(src, dst, n=n)


def k4_plus_pendant():
    # vertex 0 is u; vertex 4 hangs off it
    return graph_of([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])


def cycle(n):
    return graph_of([(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return graph_of(itertools.combinations(range(n), 2), n=n)


def brute_triangles(g):
    adj = g.adjacency_sets()
    tri = np.zeros(g.n, dtype=np.int64)
    for a, b, c in itertools.combinations(range(g.n), 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            tri[[a, b, c]] += 1
    return tri


def brute_max_surplus(g, alpha):
    """max over nonempty vertex subsets of e(S) - alpha*C(|S|,2), exactly."""
    n = g.n
    nbr_mask = [sum(1 << u for u in g.neighbors(v).tolist()) for v in range(n)]
    best = None
    for mask in range(1, 1 << n):
        k = bin(mask).count("1")
        twice_e = sum(bin(nbr_mask[v] & mask).count("1") for v in range(n) if mask >> v & 1)
        f = twice_e // 2 - alpha * (k * (k - 1) // 2)
        if best is None or f > best:
            best = f
    return best


def record(criterion, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] {criterion}: {detail}")


def record_not_run(criterion, detail):
    ACCEPTANCE_LINES.append(f"[NOT RUN] {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture
def k4p():
    return k4_plus_pendant()
