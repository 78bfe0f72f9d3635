"""Pure-Python kernels.

Reference implementations of the inner loops. ``_ckernels.pyx`` mirrors
each function and must return identical results. All functions take the
CSR arrays of a :class:`~nbclique.graph.Graph`.

Edge-surplus arithmetic is done on integers: with ``alpha = p / q`` the
quantity ``q * f_alpha(S) = q * e(S) - p * C(|S|, 2)`` is exact.
"""
from __future__ import annotations

import heapq

import numpy as np


def _adjacency(indptr, indices) -> list[list[int]]:
    ip = indptr.tolist()
    ix = indices.tolist()
    return [ix[ip[v] : ip[v + 1]] for v in range(len(ip) - 1)]


def triangle_counts(indptr, indices) -> np.ndarray:
    """Per-vertex triangle counts by degree-ordered neighbor intersection.

    Each edge is oriented from lower to higher ``(degree, id)`` rank, so every
    triangle is found once, from its lowest-ranked vertex.
    """
    adj = _adjacency(indptr, indices)
    n = len(adj)
    deg = [len(a) for a in adj]
    out = [
        frozenset(u for u in adj[v] if (deg[u], u) > (deg[v], v)) for v in range(n)
    ]
    tri = [0] * n
    for v in range(n):
        out_v = out[v]
        for u in out_v:
            common = out_v & out[u]
            if common:
                k = len(common)
                tri[v] += k
                tri[u] += k
                for w in common:
                    tri[w] += 1
    return np.asarray(tri, dtype=np.int64)


def core_numbers(indptr, indices) -> np.ndarray:
    """Core number of every vertex (Batagelj-Zaversnik bucket peeling)."""
    adj = _adjacency(indptr, indices)
    n = len(adj)
    deg = [len(a) for a in adj]
    md = max(deg, default=0)
    bins = [0] * (md + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(md + 1):
        bins[d], start = start, start + bins[d]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    if md >= 0 and n:
        bins[0] = 0
    for i in range(n):
        v = vert[i]
        for u in adj[v]:
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bins[du] += 1
                deg[u] -= 1
    return np.asarray(deg, dtype=np.int64)


def peel_order(indptr, indices) -> tuple[np.ndarray, np.ndarray]:
    """Repeatedly remove a minimum-degree vertex, lowest id first.

    Returns the removal order and each vertex's degree at removal time.
    """
    adj = _adjacency(indptr, indices)
    n = len(adj)
    deg = [len(a) for a in adj]
    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    removed = [False] * n
    order = []
    at_removal = []
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        at_removal.append(d)
        for u in adj[v]:
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return np.asarray(order, dtype=np.int64), np.asarray(at_removal, dtype=np.int64)


def local_search(indptr, indices, members, p: int, q: int, t_max: int):
    """Single-vertex add/delete hill climbing on ``q * e(S) - p * C(|S|, 2)``.

    One outer iteration runs addition sweeps until a sweep adds nothing,
    then deletion sweeps until a sweep deletes nothing. A sweep visits a
    sorted snapshot of the candidates (boundary vertices for additions,
    members for deletions) and applies every strictly improving move as it
    is met. Stops after an outer iteration with no move, or after ``t_max``
    outer iterations.

    Returns ``(members, moves, iterations, converged)``; ``moves`` encodes an
    addition of ``v`` as ``v + 1`` and a deletion as ``-(v + 1)``.
    """
    adj = _adjacency(indptr, indices)
    n = len(adj)
    in_s: set[int] = set()
    inside = [0] * n  # neighbors of v that are in S
    for v in members:
        v = int(v)
        if v not in in_s:
            in_s.add(v)
            for u in adj[v]:
                inside[u] += 1
    moves: list[int] = []
    converged = False
    iterations = 0
    while iterations < t_max:
        iterations += 1
        moved = False
        while True:
            cand = sorted({u for v in in_s for u in adj[v]} - in_s)
            added = False
            for u in cand:
                if q * inside[u] - p * len(in_s) > 0:
                    in_s.add(u)
                    for w in adj[u]:
                        inside[w] += 1
                    moves.append(u + 1)
                    added = True
            if not added:
                break
            moved = True
        while True:
            deleted = False
            for u in sorted(in_s):
                if p * (len(in_s) - 1) - q * inside[u] > 0:
                    in_s.discard(u)
                    for w in adj[u]:
                        inside[w] -= 1
                    moves.append(-(u + 1))
                    deleted = True
            if not deleted:
                break
            moved = True
        if not moved:
            converged = True
            break
    result = np.asarray(sorted(in_s), dtype=np.int64)
    return result, np.asarray(moves, dtype=np.int64), iterations, converged
