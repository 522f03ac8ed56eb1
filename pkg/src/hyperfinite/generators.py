"""Deterministic and seeded graph families."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs at least one vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], M=2 if n > 2 else n - 1)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a simple cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], M=2)


def torus_vertex(n: int, i: int, j: int) -> int:
    return (i % n) * n + (j % n)


def torus(n: int) -> Graph:
    """The n-by-n discrete torus; vertex ``(i, j)`` has id ``i*n + j``."""
    if n < 3:
        raise ValueError("torus side must be at least 3 to stay simple and 4-regular")
    edges = []
    for i in range(n):
        for j in range(n):
            v = torus_vertex(n, i, j)
            edges.append((v, torus_vertex(n, i, j + 1)))
            edges.append((v, torus_vertex(n, i + 1, j)))
    return Graph.from_edges(n * n, edges, M=4)


def binary_tree(depth: int) -> Graph:
    """Complete binary tree with ``2**(depth+1) - 1`` vertices, heap-indexed."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    n = 2 ** (depth + 1) - 1
    edges = [((v - 1) // 2, v) for v in range(1, n)]
    return Graph.from_edges(n, edges, M=3 if depth >= 1 else 0)


def random_regular(d: int, n: int, seed: int | None = None, max_tries: int = 10_000) -> Graph:
    """Uniform simple d-regular graph by configuration-model rejection sampling.

    Each attempt pairs a shuffled stub list; attempts with a loop or a repeated
    pair are discarded whole, which keeps the output uniform over simple graphs.
    """
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    if (d * n) % 2:
        raise ValueError("d * n must be even")
    if d >= n:
        raise ValueError("need d < n")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        if np.any(lo == hi):
            continue
        keys = lo.astype(np.int64) * n + hi
        if np.unique(keys).size != keys.size:
            continue
        return Graph.from_edges(n, zip(lo.tolist(), hi.tolist()), M=d)
    raise RuntimeError(f"no simple {d}-regular graph on {n} vertices after {max_tries} attempts")


def random_bounded_degree(n: int, M: int, p_edge: float, seed: int | None = None) -> Graph:
    """Random graph with degrees at most ``M``: shuffled candidate edges kept greedily.

    Used for fuzzing; not a named model.
    """
    rng = np.random.default_rng(seed)
    deg = [0] * n
    edges = []
    cand = [(u, v) for u in range(n) for v in range(u + 1, n)] if n <= 60 else None
    if cand is None:
        # sparse regime: sample endpoints directly
        target = int(p_edge * n * M / 2)
        seen = set()
        for _ in range(target * 3):
            u, v = (int(x) for x in rng.integers(0, n, size=2))
            if u == v:
                continue
            e = (min(u, v), max(u, v))
            if e in seen or deg[u] >= M or deg[v] >= M:
                continue
            seen.add(e)
            deg[u] += 1
            deg[v] += 1
            edges.append(e)
            if len(edges) >= target:
                break
    else:
        for idx in rng.permutation(len(cand)):
            u, v = cand[idx]
            if rng.random() < p_edge and deg[u] < M and deg[v] < M:
                deg[u] += 1
                deg[v] += 1
                edges.append((u, v))
    return Graph.from_edges(n, edges, M=M)
