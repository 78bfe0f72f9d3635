"""Undirected simple graphs in compressed sparse row form.

Vertices are dense internal ids ``0..n-1``. The external ids found in the
input file are kept in ``Graph.labels`` so results can be reported in the
caller's id space.
"""
from __future__ import annotations

import gzip
import io
import os
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "DegreeStats",
    "IngestSummary",
    "EdgeListError",
    "parse_edge_list",
    "read_edge_list",
    "write_edge_list",
    "from_edges",
    "degree_stats",
    "induced_subgraph",
]

COMMENT_PREFIXES = ("#", "%")


class EdgeListError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``indptr`` and ``indices`` form a CSR adjacency structure; the slice
    ``indices[indptr[v]:indptr[v + 1]]`` is the strictly increasing
    neighbor list of ``v``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: np.ndarray | None = None
    summary: "IngestSummary | None" = field(default=None, compare=False)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        if self.labels is not None:
            self.labels.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < len(nbrs) and nbrs[i] == v)

    def label(self, v: int) -> int:
        return int(self.labels[v]) if self.labels is not None else int(v)

    def edges(self) -> np.ndarray:
        """Return an ``(m, 2)`` array of edges with ``u < v``."""
        src = np.repeat(np.arange(self.n, dtype=self.indices.dtype), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def adjacency_sets(self) -> list[set[int]]:
        return [set(self.neighbors(v).tolist()) for v in range(self.n)]

    def validate(self) -> None:
        """Check every structural invariant; raise ``AssertionError`` on failure."""
        deg = self.degrees
        assert self.indptr[0] == 0 and np.all(deg >= 0)
        assert len(self.indices) % 2 == 0
        for v in range(self.n):
            nbrs = self.neighbors(v)
            assert np.all(np.diff(nbrs) > 0), f"neighbor list of {v} not strictly increasing"
            assert not np.any(nbrs == v), f"self-loop at {v}"
        e = self.edges()
        assert len(e) == self.m, "adjacency is not symmetric"
        for u, v in e:
            assert self.has_edge(int(v), int(u)), f"edge ({u},{v}) missing reverse"

    def same_structure(self, other: "Graph") -> bool:
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def canonical(self) -> "Graph":
        """Relabel internal ids in increasing order of external id."""
        labels = self.labels if self.labels is not None else np.arange(self.n)
        order = np.argsort(labels, kind="stable")
        rank = np.empty(self.n, dtype=np.int64)
        rank[order] = np.arange(self.n)
        e = self.edges()
        return from_edges(rank[e[:, 0]], rank[e[:, 1]], n=self.n, labels=labels[order])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class IngestSummary:
    n: int
    m: int
    self_loops_dropped: int
    duplicates_dropped: int
    d_max: int
    d_min: int | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "self_loops_dropped": self.self_loops_dropped,
            "duplicates_dropped": self.duplicates_dropped,
            "d_max": self.d_max,
            "d_min": self.d_min,
        }


@dataclass(frozen=True)
class DegreeStats:
    d_max: int
    d_min: int | None  # smallest degree > 1; None when every degree is <= 1
    histogram: dict[int, int]
    unique_degrees: list[int]
    missing_degree_count: int


def from_edges(src, dst, n: int | None = None, labels=None, summary=None) -> Graph:
    """Build a graph from endpoint arrays of internal ids.

    Self-loops and repeated edges are removed; both orientations of each
    edge are stored.
    """
    src = np.asarray(src, dtype=np.int64).ravel()
    dst = np.asarray(dst, dtype=np.int64).ravel()
    if src.shape != dst.shape:
        raise ValueError("src and dst must have the same length")
    if n is None:
        n = int(max(src.max(initial=-1), dst.max(initial=-1))) + 1
    if len(src) and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
        raise ValueError("edge endpoint out of range")
    keep = src != dst
    lo = np.minimum(src[keep], dst[keep])
    hi = np.maximum(src[keep], dst[keep])
    key = np.unique(lo * n + hi)
    lo, hi = key // n, key % n
    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    idx_dtype = np.int32 if n < 2**31 else np.int64
    if labels is not None:
        labels = np.asarray(labels, dtype=np.int64).copy()
    return Graph(indptr, cols.astype(idx_dtype), labels, summary)


def _open_text(path) -> io.TextIOBase:
    path = os.fspath(path)
    if path.endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def read_edge_list(path, symmetrize: bool = True, drop_self_loops: bool = True) -> Graph:
    """Parse an edge-list file (``.gz`` is decompressed transparently)."""
    with _open_text(path) as fh:
        return parse_edge_list(fh, symmetrize=symmetrize, drop_self_loops=drop_self_loops)


def parse_edge_list(
    lines: Iterable[str], symmetrize: bool = True, drop_self_loops: bool = True
) -> Graph:
    """Parse whitespace-separated ``u v`` lines into a :class:`Graph`.

    Lines starting with ``#`` or ``%`` are comments and blank lines are
    skipped. External ids are compacted to ``0..n-1`` in order of first
    appearance. With ``symmetrize=False`` every edge must also be listed in
    the reverse direction. With ``drop_self_loops=False`` a self-loop is an
    error; otherwise it is dropped but its vertex is kept.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    ids: dict[int, int] = {}
    src: list[int] = []
    dst: list[int] = []
    self_loops = 0
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected 2 tokens, got {len(parts)}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer token in {line!r}", lineno) from None
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        if u == v:
            if not drop_self_loops:
                raise EdgeListError(f"self-loop on vertex {a}", lineno)
            self_loops += 1
            continue
        src.append(u)
        dst.append(v)
    if not ids:
        raise EdgeListError("empty edge list")

    n = len(ids)
    s = np.asarray(src, dtype=np.int64)
    d = np.asarray(dst, dtype=np.int64)
    if not symmetrize and len(s):
        fwd = np.unique(s * n + d)
        rev = np.unique(d * n + s)
        if len(fwd) != len(rev) or not np.array_equal(fwd, rev):
            missing = np.setdiff1d(fwd, rev)[0]
            raise EdgeListError(
                f"edge without reverse direction ({missing // n}, {missing % n}); "
                "use symmetrize=True"
            )
    labels = np.fromiter(ids.keys(), dtype=np.int64, count=n)
    g = from_edges(s, d, n=n, labels=labels)
    stats = degree_stats(g)
    summary = IngestSummary(
        n=g.n,
        m=g.m,
        self_loops_dropped=self_loops,
        duplicates_dropped=len(src) - g.m,
        d_max=stats.d_max,
        d_min=stats.d_min,
    )
    return Graph(g.indptr, g.indices, g.labels, summary)


def write_edge_list(g: Graph, stream) -> None:
    """Write ``g`` so that :func:`parse_edge_list` rebuilds the same ids.

    Each edge is written once, from its larger endpoint, after every
    smaller vertex has appeared. A vertex with no smaller neighbor is
    introduced by a self-loop line, which the parser drops by default.
    """
    for v in range(g.n):
        lv = g.label(v)
        nbrs = g.neighbors(v)
        lower = nbrs[nbrs < v]
        if len(lower) == 0:
            stream.write(f"{lv} {lv}\n")
        for u in lower.tolist():
            stream.write(f"{lv} {g.label(u)}\n")


def degree_stats(g: Graph) -> DegreeStats:
    deg = g.degrees
    d_max = int(deg.max(initial=0))
    values, counts = np.unique(deg, return_counts=True)
    histogram = {int(d): int(c) for d, c in zip(values, counts)}
    big = values[values > 1]
    if len(big) == 0:
        return DegreeStats(d_max, None, histogram, [], 0)
    d_min = int(big[0])
    unique = [int(d) for d in big]
    return DegreeStats(d_max, d_min, histogram, unique, (d_max - d_min + 1) - len(unique))


def _as_vertex_array(g: Graph, s) -> np.ndarray:
    arr = np.unique(np.fromiter((int(v) for v in s), dtype=np.int64))
    if len(arr) and (arr[0] < 0 or arr[-1] >= g.n):
        bad = arr[0] if arr[0] < 0 else arr[-1]
        raise IndexError(f"vertex {bad} out of range for graph with n={g.n}")
    return arr


def induced_subgraph(g: Graph, s) -> Graph:
    """Subgraph induced by vertex set ``s``.

    Vertices are renumbered in increasing internal-id order; external ids
    carry over through ``labels``.
    """
    verts = _as_vertex_array(g, s)
    local = np.full(g.n, -1, dtype=np.int64)
    local[verts] = np.arange(len(verts))
    src, dst = [], []
    for i, v in enumerate(verts.tolist()):
        nbrs = g.neighbors(v)
        inside = local[nbrs]
        inside = inside[inside > i]
        src.append(np.full(len(inside), i, dtype=np.int64))
        dst.append(inside)
    labels = g.labels[verts] if g.labels is not None else verts
    if not src:
        return from_edges([], [], n=0, labels=labels)
    return from_edges(np.concatenate(src), np.concatenate(dst), n=len(verts), labels=labels)
