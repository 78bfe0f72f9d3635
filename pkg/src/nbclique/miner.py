"""Clique and quasi-clique mining with the edge-surplus objective.

``f_alpha(S) = e(S) - alpha * C(|S|, 2)`` rewards edges and charges for
size. Neighborhood seeds (picked by clustering coefficient) are refined by
single-vertex local search; greedy min-degree peeling and k-core / average
degree seeds serve as baselines.

``alpha`` is handled as an exact fraction throughout, so objective
comparisons never depend on rounding.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .graph import Graph, _as_vertex_array
from .metrics import (
    VertexMetrics,
    count_triangles,
    edges_within,
    find_ego_cliques,
    induced_subgraph,
    is_maximal_clique,
    vertex_metrics,
)

__all__ = [
    "DEFAULT_ALPHAS",
    "QUASI_CLIQUE_LADDER",
    "STRATEGIES",
    "EdgeSurplusParams",
    "SeedSet",
    "SubgraphReport",
    "MiningPlan",
    "MiningResult",
    "as_ratio",
    "edge_surplus",
    "subgraph_report",
    "greedy_oqc",
    "local_search_oqc",
    "seeds_s1",
    "seeds_s2",
    "kcore_decomposition",
    "seed_avg_degree",
    "select_best",
    "mine",
]

MAX_DENOMINATOR = 10_000

DEFAULT_ALPHAS = (
    Fraction(1, 3),
    Fraction(7, 10),
    Fraction(3, 4),
    Fraction(4, 5),
    Fraction(17, 20),
    Fraction(9, 10),
    Fraction(1),
)
QUASI_CLIQUE_LADDER = (Fraction(9, 10), Fraction(17, 20), Fraction(4, 5), Fraction(3, 4), Fraction(7, 10))
S1_RANGE = (Fraction(7, 10), Fraction(19, 20))
S2_BUCKETS = tuple(
    (Fraction(70 + 5 * k, 100), Fraction(75 + 5 * k, 100)) for k in range(5)
)
STRATEGIES = ("ego", "s1+localsearch", "s2+localsearch", "greedy", "kcore-seed", "avgdeg-seed")


def as_ratio(alpha) -> Fraction:
    """Exact fraction for ``alpha``; floats snap to the nearest small-denominator ratio."""
    if isinstance(alpha, Fraction):
        r = alpha
    elif isinstance(alpha, int):
        r = Fraction(alpha)
    else:
        r = Fraction(float(alpha)).limit_denominator(MAX_DENOMINATOR)
    if not 0 < r <= 1:
        raise ValueError(f"alpha={alpha} outside (0, 1]")
    return r


@dataclass(frozen=True)
class EdgeSurplusParams:
    alpha: Fraction = Fraction(1, 3)
    t_max: int = 50

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_ratio(self.alpha))
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")


@dataclass(frozen=True)
class SeedSet:
    center: int | None
    members: tuple[int, ...]
    strategy: str
    alpha_used: Fraction
    seed_density: float | None
    seed_surplus: float


@dataclass
class SubgraphReport:
    members: tuple[int, ...]
    size: int
    edges: int
    density: float | None
    triangle_density: float | None
    surplus: float
    alpha: Fraction
    is_clique: bool
    is_maximal_clique: bool | None
    algorithm: str
    seed: SeedSet | None = None
    termination: str | None = None
    iterations: int = 0
    trace: list[float] = field(default_factory=list, repr=False)

    def density_ratio(self) -> Fraction | None:
        if self.size < 2:
            return None
        return Fraction(self.edges, self.size * (self.size - 1) // 2)


def _pairs(k: int) -> int:
    return k * (k - 1) // 2


def _surplus(edges: int, size: int, alpha: Fraction) -> Fraction:
    return edges - alpha * _pairs(size)


def edge_surplus(g: Graph, s, alpha) -> float:
    """``e(S) - alpha * C(|S|, 2)``."""
    verts = _as_vertex_array(g, s)
    if len(verts) == 0:
        raise ValueError("edge surplus of an empty set")
    return float(_surplus(edges_within(g, verts), len(verts), as_ratio(alpha)))


def subgraph_report(
    g: Graph,
    members,
    alpha,
    algorithm: str,
    seed: SeedSet | None = None,
    termination: str | None = None,
    iterations: int = 0,
) -> SubgraphReport:
    alpha = as_ratio(alpha)
    verts = _as_vertex_array(g, members)
    k = len(verts)
    e = edges_within(g, verts)
    clique = e == _pairs(k)
    if k < 3:
        tau = None
    elif clique:
        tau = 1.0
    else:
        tau = count_triangles(induced_subgraph(g, verts)).total / (k * (k - 1) * (k - 2) // 6)
    return SubgraphReport(
        members=tuple(verts.tolist()),
        size=k,
        edges=e,
        density=e / _pairs(k) if k >= 2 else None,
        triangle_density=tau,
        surplus=float(_surplus(e, k, alpha)),
        alpha=alpha,
        is_clique=clique,
        is_maximal_clique=is_maximal_clique(g, verts) if clique and k else None,
        algorithm=algorithm,
        seed=seed,
        termination=termination,
        iterations=iterations,
    )


def greedy_oqc(g: Graph, alpha) -> SubgraphReport:
    """Best set, under ``f_alpha``, among the states of min-degree peeling.

    Vertices are removed one at a time, lowest current degree first and
    lowest id on ties. Of the ``n`` nonempty remaining sets the one with
    the largest objective wins; ties go to the larger set, which makes the
    result at ``alpha = 1`` the largest clique the peeling passes through.
    """
    if g.n == 0:
        raise ValueError("greedy peeling needs a nonempty graph")
    a = as_ratio(alpha)
    order, at_removal = kernels.peel_order(g.indptr, g.indices)
    n = g.n
    # state k: the first k vertices of `order` have been removed
    removed_edges = np.concatenate([[0], np.cumsum(at_removal[:-1])])
    edges = g.m - removed_edges
    sizes = n - np.arange(n, dtype=np.int64)
    p, q = a.numerator, a.denominator
    if p * _pairs(n) < 2**62 and q * g.m < 2**62:
        scores = q * edges - p * (sizes * (sizes - 1) // 2)
        best = int(np.argmax(scores))  # first maximum = largest set
    else:
        scores = [q * int(e) - p * _pairs(int(s)) for e, s in zip(edges, sizes)]
        best = max(range(n), key=lambda k: (scores[k], -k))
    return subgraph_report(g, order[best:], a, "greedy", termination="peeled")


def local_search_oqc(
    g: Graph, seed: SeedSet, params: EdgeSurplusParams | None = None, record: bool = False
) -> SubgraphReport:
    """Refine ``seed`` by strictly improving single-vertex additions and deletions.

    Each outer iteration repeats ascending-id addition sweeps over the
    vertices adjacent to the current set until one adds nothing, then does
    the same with deletion sweeps over the members. The search stops at a
    local optimum or after ``params.t_max`` outer iterations.

    With ``record=True`` the objective after every move is kept in
    ``report.trace`` (starting with the seed's value).
    """
    if params is None:
        params = EdgeSurplusParams(seed.alpha_used)
    if not seed.members:
        raise ValueError("seed set is empty")
    a = params.alpha
    result, moves, iterations, converged = kernels.local_search(
        g.indptr, g.indices, np.asarray(seed.members, dtype=np.int64),
        a.numerator, a.denominator, params.t_max,
    )
    report = subgraph_report(
        g, result, a, "localsearch", seed=seed,
        termination="local_optimum" if converged else "t_max", iterations=iterations,
    )
    if record:
        report.trace = _replay(g, seed.members, moves, a)
    return report


def _replay(g: Graph, members, moves, alpha: Fraction) -> list[float]:
    in_s = np.zeros(g.n, dtype=bool)
    in_s[list(members)] = True
    e = edges_within(g, members)
    k = int(in_s.sum())
    trace = [float(_surplus(e, k, alpha))]
    for mv in moves.tolist():
        v = abs(mv) - 1
        links = int(in_s[g.neighbors(v)].sum())
        if mv > 0:
            in_s[v] = True
            e, k = e + links, k + 1
        else:
            in_s[v] = False
            e, k = e - links, k - 1
        trace.append(float(_surplus(e, k, alpha)))
    return trace


def _closed_neighborhood(g: Graph, v: int) -> tuple[int, ...]:
    return tuple(sorted([v, *g.neighbors(v).tolist()]))


def _neighborhood_seed(g: Graph, vm: VertexMetrics, v: int, strategy: str, alpha: Fraction) -> SeedSet:
    d, t = int(vm.degree[v]), int(vm.triangles[v])
    e = d + t  # center edges plus edges among neighbors
    return SeedSet(
        center=v,
        members=_closed_neighborhood(g, v),
        strategy=strategy,
        alpha_used=alpha,
        seed_density=e / _pairs(d + 1) if d >= 1 else None,
        seed_surplus=float(_surplus(e, d + 1, alpha)),
    )


def seeds_s1(g: Graph, vm: VertexMetrics | None = None) -> list[SeedSet]:
    """Closed neighborhoods of vertices with ``0.70 <= C_v <= 0.95``, for ``alpha = 1``.

    Ordered by decreasing ``C_v``, then increasing id.
    """
    if vm is None:
        vm, _ = vertex_metrics(g)
    lo, hi = S1_RANGE
    hits = np.flatnonzero(vm.cc_in_range(lo, hi)).tolist()
    hits.sort(key=lambda v: (-vm.local_cc_exact(v), v))
    return [_neighborhood_seed(g, vm, v, "S1", Fraction(1)) for v in hits]


def seeds_s2(g: Graph, vm: VertexMetrics | None = None) -> list[SeedSet]:
    """One seed per density bucket ``[0.70, 0.75), ..., [0.90, 0.95)``.

    In each bucket the vertex whose closed neighborhood has the largest
    surplus at the bucket's lower bound wins (lowest id on ties), and the
    seed carries that lower bound as its ``alpha``.
    """
    if vm is None:
        vm, _ = vertex_metrics(g)
    seeds = []
    for lo, hi in S2_BUCKETS:
        hits = np.flatnonzero(vm.cc_in_range(lo, hi, closed_hi=False))
        if len(hits) == 0:
            continue
        d = vm.degree[hits].astype(object)
        e = d + vm.triangles[hits].astype(object)
        scaled = lo.denominator * e - lo.numerator * ((d + 1) * d // 2)
        best = max(range(len(hits)), key=lambda i: (scaled[i], -hits[i]))
        seeds.append(_neighborhood_seed(g, vm, int(hits[best]), "S2", lo))
    return seeds


def kcore_decomposition(g: Graph) -> tuple[np.ndarray, SeedSet]:
    """Core numbers and the innermost (maximum) core as a seed."""
    core = kernels.core_numbers(g.indptr, g.indices)
    k = int(core.max(initial=0))
    members = tuple(np.flatnonzero(core == k).tolist())
    e = edges_within(g, members) if members else 0
    size = len(members)
    seed = SeedSet(
        center=None,
        members=members,
        strategy="KCore",
        alpha_used=Fraction(1),
        seed_density=e / _pairs(size) if size >= 2 else None,
        seed_surplus=float(_surplus(e, size, Fraction(1))),
    )
    return core, seed


def seed_avg_degree(g: Graph, vm: VertexMetrics | None = None) -> SeedSet:
    """Closed neighborhood with the highest internal average degree.

    The closed neighborhood of ``v`` has ``d_v + t_v`` edges on ``d_v + 1``
    vertices, so no extra counting is needed.
    """
    if vm is None:
        vm, _ = vertex_metrics(g)
    deg = vm.degree
    if not np.any(deg >= 1):
        raise ValueError("graph has no edges")
    num = deg + vm.triangles
    approx = np.where(deg >= 1, num / (deg + 1), -1.0)
    near = np.flatnonzero(approx >= approx.max() - 1e-9)
    best = max(near.tolist(), key=lambda v: (Fraction(int(num[v]), int(deg[v]) + 1), -v))
    return _neighborhood_seed(g, vm, best, "AvgDegree", Fraction(1))


@dataclass(frozen=True)
class MiningPlan:
    strategy: str = "all"
    alphas: tuple = DEFAULT_ALPHAS
    t_max: int = 50
    threads: int = 1
    min_ego_size: int = 3
    max_ego_cliques: int = 100

    def __post_init__(self):
        if self.strategy != "all" and self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; choose from {', '.join(STRATEGIES)} or all")
        object.__setattr__(self, "alphas", tuple(sorted({as_ratio(a) for a in self.alphas})))
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    def strategies(self) -> tuple[str, ...]:
        return STRATEGIES if self.strategy == "all" else (self.strategy,)


@dataclass
class MiningResult:
    reports: list[tuple[str, SubgraphReport]]
    best_clique: int | None
    best_quasi_clique: int | None

    @property
    def best_clique_report(self) -> SubgraphReport | None:
        return None if self.best_clique is None else self.reports[self.best_clique][1]

    @property
    def best_quasi_clique_report(self) -> SubgraphReport | None:
        return None if self.best_quasi_clique is None else self.reports[self.best_quasi_clique][1]


def _refine_all(g: Graph, jobs: list[tuple[SeedSet, EdgeSurplusParams]], threads: int):
    if threads == 1 or len(jobs) < 2:
        return [local_search_oqc(g, s, p) for s, p in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: local_search_oqc(g, *job), jobs))


def _run_strategy(g: Graph, vm: VertexMetrics, strategy: str, plan: MiningPlan) -> list[SubgraphReport]:
    out: list[SubgraphReport] = []
    if strategy == "ego":
        egos = {}
        for ec in find_ego_cliques(g, max(2, plan.min_ego_size), vm):
            egos.setdefault(ec.members, ec.center)
        ranked = sorted(egos.items(), key=lambda kv: (-len(kv[0]), kv[1]))[: plan.max_ego_cliques]
        for members, center in ranked:
            seed = _neighborhood_seed(g, vm, center, "Ego", Fraction(1))
            out.append(subgraph_report(g, members, 1, "neighborhood", seed=seed))
        for seed in seeds_s2(g, vm):
            out.append(subgraph_report(g, seed.members, seed.alpha_used, "neighborhood", seed=seed))
        return out
    if strategy == "greedy":
        return [greedy_oqc(g, a) for a in plan.alphas]

    if strategy == "s1+localsearch":
        seeds = seeds_s1(g, vm)
        jobs = [(s, EdgeSurplusParams(s.alpha_used, plan.t_max)) for s in seeds]
    elif strategy == "s2+localsearch":
        seeds = seeds_s2(g, vm)
        jobs = [(s, EdgeSurplusParams(s.alpha_used, plan.t_max)) for s in seeds]
    elif strategy == "kcore-seed":
        seeds = [kcore_decomposition(g)[1]]
        jobs = [(seeds[0], EdgeSurplusParams(a, plan.t_max)) for a in plan.alphas]
    elif strategy == "avgdeg-seed":
        seeds = [seed_avg_degree(g, vm)]
        jobs = [(seeds[0], EdgeSurplusParams(a, plan.t_max)) for a in plan.alphas]
    else:  # pragma: no cover - MiningPlan validates
        raise ValueError(strategy)
    for s in seeds:
        out.append(subgraph_report(g, s.members, s.alpha_used, "seed", seed=s))
    out.extend(_refine_all(g, jobs, plan.threads))
    return out


def _order_key(item: tuple[str, SubgraphReport]):
    strategy, r = item
    center = r.seed.center if r.seed is not None and r.seed.center is not None else -1
    return (STRATEGIES.index(strategy), r.alpha, center, r.algorithm != "seed", -r.size, r.members)


def select_best(reports: list[tuple[str, SubgraphReport]]) -> tuple[int | None, int | None]:
    """Indices of the largest clique and of the ladder-selected quasi-clique."""
    best_clique = None
    for i, (_, r) in enumerate(reports):
        if r.is_clique and r.size >= 2:
            if best_clique is None or r.size > reports[best_clique][1].size:
                best_clique = i
    best_quasi = None
    for rung in QUASI_CLIQUE_LADDER:
        for i, (_, r) in enumerate(reports):
            if r.is_clique or r.size < 2 or r.alpha != rung:
                continue
            if best_quasi is None:
                best_quasi = i
                continue
            cur = reports[best_quasi][1]
            if (r.density_ratio(), r.size) > (cur.density_ratio(), cur.size):
                best_quasi = i
        if best_quasi is not None:
            break
    return best_clique, best_quasi


def mine(g: Graph, plan: MiningPlan | None = None, vm: VertexMetrics | None = None) -> MiningResult:
    """Run the planned strategies and flag the best clique and quasi-clique.

    The best clique is the largest clique found. The best quasi-clique is
    the densest non-clique (larger on ties) among results obtained at
    ``alpha = 0.9``, falling back to 0.85, 0.8, 0.75 and 0.7 in turn.
    """
    plan = plan or MiningPlan()
    if g.n == 0 or g.m == 0:
        return MiningResult([], None, None)
    if vm is None:
        vm, _ = vertex_metrics(g)
    reports = []
    for strategy in plan.strategies():
        reports.extend((strategy, r) for r in _run_strategy(g, vm, strategy, plan))
    reports.sort(key=_order_key)
    best_clique, best_quasi = select_best(reports)
    return MiningResult(reports, best_clique, best_quasi)
