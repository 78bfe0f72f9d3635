"""Triangles, clustering coefficients, and neighborhood density.

The edge-density of a vertex neighborhood equals the vertex's local
clustering coefficient, so neighborhood quality for every vertex falls out
of a single triangle count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import kernels
from .graph import Graph, _as_vertex_array, induced_subgraph

__all__ = [
    "TriangleCounts",
    "VertexMetrics",
    "GlobalMetrics",
    "NDPEntry",
    "NDProfile",
    "EgoClique",
    "count_triangles",
    "vertex_metrics",
    "edges_within",
    "edge_density",
    "triangle_density",
    "is_clique",
    "is_maximal_clique",
    "ndp",
    "find_ego_cliques",
    "largest_ego_clique_size",
    "neighborhood_edge_counts",
    "local_cc_density_violations",
    "wedge_identity_residual",
]


@dataclass(frozen=True)
class TriangleCounts:
    per_vertex: np.ndarray
    total: int


@dataclass(frozen=True)
class VertexMetrics:
    """Per-vertex quantities, one array entry per internal id.

    ``closed_wedges`` equals ``triangles``: each triangle at ``v`` closes
    exactly one wedge centered at ``v``.
    """

    degree: np.ndarray
    triangles: np.ndarray
    wedges: np.ndarray
    local_cc: np.ndarray
    wedge_prob: np.ndarray

    @property
    def closed_wedges(self) -> np.ndarray:
        return self.triangles

    def local_cc_exact(self, v: int) -> Fraction:
        w = int(self.wedges[v])
        return Fraction(int(self.triangles[v]), w) if w else Fraction(0)

    def cc_in_range(self, lo: Fraction, hi: Fraction, closed_hi: bool = True) -> np.ndarray:
        """Mask of vertices with ``lo <= C_v <= hi`` (or ``< hi``), compared exactly.

        Vertices without wedges never match.
        """
        t, w = self.triangles, self.wedges  # small denominators keep int64 exact
        ge = t * lo.denominator >= w * lo.numerator
        if closed_hi:
            le = t * hi.denominator <= w * hi.numerator
        else:
            le = t * hi.denominator < w * hi.numerator
        return np.asarray(ge & le & (self.wedges > 0), dtype=bool)


@dataclass(frozen=True)
class GlobalMetrics:
    total_wedges: int
    total_triangles: int
    global_cc: float
    mean_local_cc: float


@dataclass(frozen=True)
class NDPEntry:
    degree: int
    max_density: float
    witness: int


@dataclass(frozen=True)
class NDProfile:
    entries: list[NDPEntry]
    d_max: int
    global_cc: float


@dataclass(frozen=True)
class EgoClique:
    center: int
    members: tuple[int, ...]
    maximal: bool

    @property
    def size(self) -> int:
        return len(self.members)


def count_triangles(g: Graph) -> TriangleCounts:
    per_vertex = kernels.triangle_counts(g.indptr, g.indices)
    return TriangleCounts(per_vertex, int(per_vertex.sum()) // 3)


def vertex_metrics(g: Graph, triangles: TriangleCounts | None = None):
    """Return ``(VertexMetrics, GlobalMetrics)`` for ``g``.

    ``C_v`` is 0 for vertices of degree below 2. The mean local coefficient
    averages over all vertices, zeros included.
    """
    if triangles is None:
        triangles = count_triangles(g)
    deg = g.degrees.astype(np.int64)
    tri = triangles.per_vertex
    wedges = deg * (deg - 1) // 2
    total_w = int(wedges.sum())
    with np.errstate(divide="ignore", invalid="ignore"):
        cc = np.where(wedges > 0, tri / np.maximum(wedges, 1), 0.0)
        prob = wedges / total_w if total_w else np.zeros(g.n)
    vm = VertexMetrics(deg, tri, wedges, cc, prob)
    c_g = 3 * triangles.total / total_w if total_w else 0.0
    c_bar = math.fsum(cc.tolist()) / g.n if g.n else 0.0
    return vm, GlobalMetrics(total_w, triangles.total, c_g, c_bar)


def _neighbor_stream(g: Graph, verts: np.ndarray) -> np.ndarray:
    if len(verts) == 0:
        return np.empty(0, dtype=np.int64)
    return np.concatenate([g.neighbors(v) for v in verts.tolist()])


def _member_mask(verts: np.ndarray, arr: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(verts, arr)
    idx[idx == len(verts)] = 0
    return verts[idx] == arr if len(verts) else np.zeros(len(arr), dtype=bool)


def edges_within(g: Graph, s) -> int:
    """Number of edges of ``g`` with both endpoints in ``s``."""
    verts = _as_vertex_array(g, s)
    return int(_member_mask(verts, _neighbor_stream(g, verts)).sum()) // 2


def edge_density(g: Graph, s) -> float:
    verts = _as_vertex_array(g, s)
    k = len(verts)
    if k < 2:
        raise ValueError("edge density needs at least 2 vertices")
    return edges_within(g, verts) / (k * (k - 1) // 2)


def triangle_density(g: Graph, s) -> float:
    verts = _as_vertex_array(g, s)
    k = len(verts)
    if k < 3:
        raise ValueError("triangle density needs at least 3 vertices")
    t = count_triangles(induced_subgraph(g, verts)).total
    return t / (k * (k - 1) * (k - 2) // 6)


def is_clique(g: Graph, s) -> bool:
    verts = _as_vertex_array(g, s)
    k = len(verts)
    return edges_within(g, verts) == k * (k - 1) // 2


def is_maximal_clique(g: Graph, s) -> bool:
    """True iff no vertex outside the clique ``s`` is adjacent to all of it."""
    verts = _as_vertex_array(g, s)
    if len(verts) == 0:
        raise ValueError("empty vertex set")
    if not is_clique(g, verts):
        raise ValueError("vertex set is not a clique")
    nbrs = _neighbor_stream(g, verts)
    outside = nbrs[~_member_mask(verts, nbrs)]
    if len(outside) == 0:
        return True
    _, counts = np.unique(outside, return_counts=True)
    return not bool(np.any(counts == len(verts)))


def ndp(g: Graph, vm: VertexMetrics | None = None, gm: GlobalMetrics | None = None) -> NDProfile:
    """Best neighborhood density for every degree >= 2 present in ``g``.

    Vertices of equal degree share a denominator, so the densest one is the
    one with most triangles; ties go to the lowest id.
    """
    if vm is None or gm is None:
        vm, gm = vertex_metrics(g)
    deg = vm.degree
    order = np.lexsort((np.arange(g.n), -vm.triangles, deg))
    entries = []
    last = -1
    for v in order.tolist():
        d = int(deg[v])
        if d < 2 or d == last:
            continue
        last = d
        entries.append(NDPEntry(d, float(vm.local_cc[v]), v))
    return NDProfile(entries, int(deg.max(initial=0)), gm.global_cc)


def find_ego_cliques(g: Graph, min_size: int = 2, vm: VertexMetrics | None = None) -> list[EgoClique]:
    """Every vertex whose closed neighborhood is a clique of ``>= min_size`` vertices.

    Each result is confirmed maximal with :func:`is_maximal_clique`.
    """
    if min_size < 2:
        raise ValueError("min_size must be at least 2")
    if vm is None:
        vm, _ = vertex_metrics(g)
    hits = np.flatnonzero(
        (vm.wedges > 0) & (vm.triangles == vm.wedges) & (vm.degree + 1 >= min_size)
    )
    out = []
    for v in hits.tolist():
        members = tuple(sorted([v, *g.neighbors(v).tolist()]))
        out.append(EgoClique(v, members, is_maximal_clique(g, members)))
    return out


def largest_ego_clique_size(vm: VertexMetrics) -> int:
    mask = (vm.wedges > 0) & (vm.triangles == vm.wedges)
    return int(vm.degree[mask].max()) + 1 if mask.any() else 0


def neighborhood_edge_counts(g: Graph) -> np.ndarray:
    """``e(N_v)`` for every ``v`` via the sparse product ``(A @ A) * A``.

    Independent of the triangle kernel; used to cross-check it.
    """
    a = sp.csr_matrix(
        (np.ones(len(g.indices), dtype=np.int64), g.indices, g.indptr), shape=(g.n, g.n)
    )
    paths = (a @ a).multiply(a)
    return np.asarray(paths.sum(axis=1)).ravel().astype(np.int64) // 2


def local_cc_density_violations(g: Graph, vm: VertexMetrics) -> list[int]:
    """Vertices where ``C_v`` differs from the edge-density of ``N_v``.

    Compares ``t_v / w_v`` with ``e(N_v) / C(d_v, 2)`` by integer
    cross-multiplication, with ``e(N_v)`` from :func:`neighborhood_edge_counts`.
    """
    e_nbr = neighborhood_edge_counts(g)
    deg = g.degrees.astype(np.int64)
    pairs = deg * (deg - 1) // 2
    ok = vm.triangles.astype(object) * pairs.astype(object) == e_nbr.astype(object) * vm.wedges.astype(object)
    ok &= pairs == vm.wedges
    bad = np.flatnonzero(~np.asarray(ok, dtype=bool) & (deg >= 2))
    return bad.tolist()


def wedge_identity_residual(vm: VertexMetrics, gm: GlobalMetrics) -> float:
    """``|sum_v p_v C_v - C_g|``, the wedge-weighted mean identity error."""
    if gm.total_wedges == 0:
        return 0.0
    return abs(math.fsum((vm.wedge_prob * vm.local_cc).tolist()) - gm.global_cc)
