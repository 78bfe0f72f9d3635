"""Acceptance criteria, one recorded PASS/FAIL line each.

The lines are printed in the "acceptance criteria" section of the pytest
terminal summary. Criteria that need a real dataset read it from
``$NBCLIQUE_DATA`` or ``tests/data``; when the file is absent the dataset
part is reported as NOT RUN and the test is skipped.
"""
import time
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from nbclique import metrics, miner, theory
from nbclique.graph import degree_stats, from_edges
from nbclique.miner import EdgeSurplusParams, MiningPlan

from conftest import (
    DATASET_FILES,
    brute_max_surplus,
    brute_triangles,
    er_graph,
    load_dataset,
    random_graphs,
    record,
    record_not_run,
)

DATASET_LABELS = {"facebook": "Facebook-A", "hepph": "arXiv-HepPh", "astroph": "arXiv-AstroPh"}


def need(name, criterion):
    g = load_dataset(name)
    if g is None:
        detail = f"dataset {DATASET_LABELS[name]} missing ({' or '.join(DATASET_FILES[name])})"
        record_not_run(criterion, detail)
        pytest.skip(detail)
    return g


def clustered_graphs(count, seed=0):
    """Power-law graphs with many triangles, so ego-cliques actually occur."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(30, 300))
        h = nx.powerlaw_cluster_graph(n, int(rng.integers(1, 6)), float(rng.uniform(0.3, 1.0)), seed=seed + i)
        yield from_edges(*np.array(list(h.edges())).T, n=n)


def mixed_graphs(count, seed=0):
    half = count // 2
    yield from random_graphs(half, seed=seed)
    yield from clustered_graphs(count - half, seed=seed)


# --- triangle counting -------------------------------------------------------

def test_triangle_oracle_equivalence():
    crit = "Triangle-oracle equivalence (200 random graphs, n<=64)"
    graphs = list(random_graphs(200, n_range=(3, 64), p_range=(0.1, 0.5), seed=42))
    t0 = time.perf_counter()
    counts = [metrics.count_triangles(g) for g in graphs]
    elapsed = time.perf_counter() - t0
    mismatches = 0
    for g, tc in zip(graphs, counts):
        ref = brute_triangles(g)
        if tc.per_vertex.tolist() != ref.tolist() or tc.total * 3 != int(ref.sum()):
            mismatches += 1
    ok = mismatches == 0 and elapsed < 10
    record(crit, ok, f"mismatches={mismatches}, kernel time={elapsed:.3f}s (limit 10s)")
    assert ok


# --- identities ----------------------------------------------------------------

def _identity_graphs():
    return list(mixed_graphs(100, seed=7))


def test_local_cc_equals_neighborhood_density_random():
    crit = "Local clustering equals neighborhood density (random graphs)"
    bad = 0
    graphs = _identity_graphs()
    for g in graphs:
        vm, _ = metrics.vertex_metrics(g)
        bad += len(metrics.local_cc_density_violations(g, vm))
    record(crit, bad == 0, f"{len(graphs)} graphs, violations={bad}")
    assert bad == 0


def test_local_cc_equals_neighborhood_density_facebook():
    crit = "Local clustering equals neighborhood density (Facebook-A)"
    g = need("facebook", crit)
    vm, _ = metrics.vertex_metrics(g)
    bad = metrics.local_cc_density_violations(g, vm)
    record(crit, not bad, f"n={g.n}, violations={len(bad)}")
    assert not bad


def test_wedge_identity_all_graphs():
    crit = "Wedge-weighted mean identity |sum p_v C_v - C_g| <= 1e-12"
    graphs = _identity_graphs()
    names = ["random"] * len(graphs)
    for name in DATASET_LABELS:
        g = load_dataset(name)
        if g is not None:
            graphs.append(g)
            names.append(DATASET_LABELS[name])
    worst = 0.0
    for g in graphs:
        vm, gm = metrics.vertex_metrics(g)
        worst = max(worst, metrics.wedge_identity_residual(vm, gm))
    real = sorted(set(names) - {"random"})
    ok = worst <= 1e-12
    record(crit, ok, f"{len(graphs)} graphs (datasets: {', '.join(real) or 'none available'}), max residual={worst:.2e}")
    assert ok


# --- graph statistics ---------------------------------------------------------------------

def test_graph_statistics_facebook():
    crit = "Published graph statistics (Facebook-A)"
    need("facebook", crit)
    from conftest import dataset_path
    from nbclique.graph import read_edge_list

    t0 = time.perf_counter()
    g = read_edge_list(dataset_path("facebook"))
    vm, gm = metrics.vertex_metrics(g)
    stats = degree_stats(g)
    elapsed = time.perf_counter() - t0
    ok = (
        (g.n, g.m) == (4039, 88234)
        and stats.d_max == 1045
        and abs(gm.global_cc - 0.519) <= 0.001
        and abs(gm.mean_local_cc - 0.605) <= 0.001
        and elapsed < 5
    )
    record(crit, ok, f"n={g.n} m={g.m} d_max={stats.d_max} C_g={gm.global_cc:.4f} "
                     f"C_bar={gm.mean_local_cc:.4f} time={elapsed:.2f}s (limit 5s)")
    assert ok


# --- largest ego-clique -------------------------------------------------------------

@pytest.mark.parametrize("name, expected", [("facebook", 11), ("hepph", 239)])
def test_largest_ego_clique(name, expected):
    crit = f"Largest ego-clique ({DATASET_LABELS[name]})"
    g = need(name, crit)
    t0 = time.perf_counter()
    vm, _ = metrics.vertex_metrics(g)
    size = metrics.largest_ego_clique_size(vm)
    elapsed = time.perf_counter() - t0
    ok = size == expected and elapsed < 30
    record(crit, ok, f"size={size} (expected {expected}), time={elapsed:.2f}s (limit 30s)")
    assert ok


# --- ego-clique maximality -------------------------------------------------------------------

def _all_ego_cliques_maximal(g):
    egos = metrics.find_ego_cliques(g, 2)
    adj = None
    bad = 0
    for ec in egos:
        if not ec.maximal:
            bad += 1
            continue
        if g.n <= 400:  # independent exhaustive scan on small graphs
            adj = adj or g.adjacency_sets()
            s = set(ec.members)
            if any(s <= adj[u] for u in range(g.n) if u not in s):
                bad += 1
    return len(egos), bad


def test_ego_cliques_maximal_random():
    crit = "Ego-clique maximality (100 random graphs)"
    total = bad = 0
    for g in mixed_graphs(100, seed=3):
        k, b = _all_ego_cliques_maximal(g)
        total, bad = total + k, bad + b
    ok = bad == 0 and total > 0
    record(crit, ok, f"ego-cliques checked={total}, violations={bad}")
    assert ok


@pytest.mark.parametrize("name", list(DATASET_LABELS))
def test_ego_cliques_maximal_dataset(name):
    crit = f"Ego-clique maximality ({DATASET_LABELS[name]})"
    g = need(name, crit)
    k, bad = _all_ego_cliques_maximal(g)
    record(crit, bad == 0, f"ego-cliques checked={k}, violations={bad}")
    assert bad == 0


# --- bound values ---------------------------------------------------------------------

def test_bound_values():
    crit = "Bound values (lower tail, variance, degree-tail bound)"
    lt = theory.lower_tail_bound(0.7, 2 / 3)
    grid = np.linspace(0, 1, 2001)
    var = np.array([theory.variance_bound(c) for c in grid])
    symmetric = bool(np.allclose(var, var[::-1], atol=1e-15))
    peak = float(grid[int(np.argmax(var))])
    seq = theory.synth_degree_sequence(theory.PowerLawModel(2, 200, n=100_000))
    violations = 0
    betas = np.linspace(2 / 200, 1, 22)[1:-1]
    for b in betas:
        if not theory.small_degree_probability_of_sequence(seq, b) < theory.eta(2, 200, b):
            violations += 1
    ok = abs(lt - 0.10) < 1e-12 and symmetric and var.max() == 0.25 and peak == 0.5 and violations == 0
    record(crit, ok, f"lower_tail(0.7,2/3)={lt:.12f}, variance max={var.max()} at C_g={peak}, "
                     f"symmetric={symmetric}, degree-tail violations={violations}/{len(betas)}")
    assert ok


# --- greedy clique property ------------------------------------------------------------

def test_greedy_alpha_one_random():
    crit = "greedyOQC alpha=1 returns a clique (200 random graphs)"
    failures = 0
    for g in mixed_graphs(200, seed=11):
        r = miner.greedy_oqc(g, 1)
        if not (r.is_clique and (r.size < 2 or metrics.edge_density(g, r.members) == 1)):
            failures += 1
    record(crit, failures == 0, f"non-clique outputs={failures}")
    assert failures == 0


@pytest.mark.parametrize("name", list(DATASET_LABELS))
def test_greedy_alpha_one_dataset(name):
    crit = f"greedyOQC alpha=1 returns a clique ({DATASET_LABELS[name]})"
    g = need(name, crit)
    r = miner.greedy_oqc(g, 1)
    ok = r.is_clique and metrics.edge_density(g, r.members) == 1
    record(crit, ok, f"size={r.size}, density={r.density}")
    assert ok


# --- local search ------------------------------------------------------------------------

def test_local_search_monotone_and_bounded():
    crit = "Local-search monotonicity and small-graph optimality"
    decreases = exceed = runs = 0
    for i, g in enumerate(random_graphs(60, n_range=(4, 12), p_range=(0.2, 0.8), seed=5)):
        if g.m == 0:
            continue
        vm, _ = metrics.vertex_metrics(g)
        seeds = miner.seeds_s1(g, vm) + miner.seeds_s2(g, vm)
        seeds.append(miner.kcore_decomposition(g)[1])
        seeds.append(miner.seed_avg_degree(g, vm))
        for a in miner.DEFAULT_ALPHAS:
            best = brute_max_surplus(g, a)
            if miner.greedy_oqc(g, a).surplus > float(best) + 1e-12:
                exceed += 1
            for s in seeds:
                r = miner.local_search_oqc(g, s, EdgeSurplusParams(a), record=True)
                runs += 1
                decreases += sum(y < x for x, y in zip(r.trace, r.trace[1:]))
                exceed += r.surplus > float(best) + 1e-12
    # larger instrumented runs: monotonicity only
    for g in list(mixed_graphs(20, seed=9)):
        vm, _ = metrics.vertex_metrics(g)
        for s in miner.seeds_s1(g, vm)[:10] + miner.seeds_s2(g, vm):
            for a in (Fraction(7, 10), Fraction(9, 10), Fraction(1)):
                r = miner.local_search_oqc(g, s, EdgeSurplusParams(a), record=True)
                runs += 1
                decreases += sum(y < x for x, y in zip(r.trace, r.trace[1:]))
    ok = decreases == 0 and exceed == 0
    record(crit, ok, f"instrumented runs={runs}, per-step decreases={decreases}, "
                     f"results above brute-force max={exceed}")
    assert ok


# --- soft targets ---------------------------------------------------------------------------

PUBLISHED_MINING = {
    # (NB+LS clique, GRDY clique, NB+LS quasi-clique size, NB+LS quasi-clique density)
    "facebook": (32, 69, 53, 0.98),
    "hepph": (239, 239, 247, 0.95),
    "astroph": (57, 57, 45, 0.99),
}


def _nb_ls_reports(res):
    return [(s, r) for s, r in res.reports
            if s in ("s1+localsearch", "s2+localsearch") and r.algorithm == "localsearch"]


@pytest.mark.parametrize("name", list(DATASET_LABELS))
def test_soft_targets_mining(name):
    crit = f"Soft targets, published mining results ({DATASET_LABELS[name]})"
    g = need(name, crit)
    res = miner.mine(g, MiningPlan(threads=4))
    ls = _nb_ls_reports(res)
    ci, qi = miner.select_best(ls)
    greedy = [(s, r) for s, r in res.reports if s == "greedy"]
    gi, _ = miner.select_best(greedy)
    p_clique, p_grdy, p_size, p_delta = PUBLISHED_MINING[name]
    clique = ls[ci][1].size if ci is not None else 0
    grdy = greedy[gi][1].size if gi is not None else 0
    q = ls[qi][1] if qi is not None else None
    q_size = q.size if q else 0
    q_delta = q.density if q else 0.0
    size_ok = abs(q_size - p_size) <= 0.2 * p_size
    delta_ok = q_delta >= p_delta - 0.03
    detail = (f"NB+LS clique {clique} (published {p_clique}, delta {clique - p_clique:+d}); "
              f"GRDY clique {grdy} (published {p_grdy}, delta {grdy - p_grdy:+d}); "
              f"NB+LS quasi-clique size {q_size} (published {p_size}, {100 * (q_size - p_size) / p_size:+.1f}%), "
              f"density {q_delta:.3f} (published {p_delta}, need >= {p_delta - 0.03:.2f})")
    record(crit, size_ok and delta_ok, detail)
    assert size_ok and delta_ok


def test_kcore_seed_astroph():
    crit = "k-core innermost core (arXiv-AstroPh) size 57, density 1"
    g = need("astroph", crit)
    _, seed = miner.kcore_decomposition(g)
    ok = len(seed.members) == 57 and seed.seed_density == 1.0
    record(crit, ok, f"size={len(seed.members)}, density={seed.seed_density}")
    assert ok


# --- neighborhood guarantee witness ----------------------------------------------------------------------

def test_neighborhood_guarantee_witness_facebook():
    crit = "Dense-neighborhood guarantee witness (Facebook-A, beta=0.05)"
    g = need("facebook", crit)
    vm, gm = metrics.vertex_metrics(g)
    w = theory.neighborhood_guarantee_witness(g, vm, gm.global_cc, 0.05)
    stats = degree_stats(g)
    detail = (f"guarantee size>={w.size_guarantee:.2f} density>={w.density_guarantee:.4f}; "
              f"nearest witness degree={w.witness_degree} density={w.witness_density}")
    if w.found:
        record(crit, True, "found; " + detail)
    else:
        # a miss is only acceptable when the degree assumptions are violated
        violated = stats.missing_degree_count > 0
        record(crit, violated, f"not found (missing degrees={stats.missing_degree_count}, logged); " + detail)
        assert violated
