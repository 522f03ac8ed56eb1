"""Slow, independent reference implementations used to check the library."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations

from hyperfinite.graph import Graph


def bfs(g: Graph, sources, radius=None) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    q = deque(dist)
    while q:
        v = q.popleft()
        if radius is not None and dist[v] == radius:
            continue
        for u in g.adj[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    return dist


def induced(g: Graph, vertices) -> tuple[Graph, dict[int, int]]:
    vs = sorted(vertices)
    local = {v: i for i, v in enumerate(vs)}
    edges = [(local[u], local[v]) for u, v in g.edges if u in local and v in local]
    return Graph.from_edges(len(vs), edges), local


def marked_isomorphic(g1: Graph, m1, g2: Graph, m2) -> bool:
    """Permutation search for an isomorphism mapping the marked set onto the marked set.

    ``m1``/``m2`` are either sets of marked vertices or a single root.
    """
    if isinstance(m1, int):
        m1, m2 = {m1}, {m2}
    m1, m2 = set(m1), set(m2)
    if g1.n != g2.n or g1.num_edges != g2.num_edges or len(m1) != len(m2):
        return False
    if sorted(map(len, g1.adj)) != sorted(map(len, g2.adj)):
        return False
    n = g1.n
    adj1 = [set(a) for a in g1.adj]
    adj2 = [set(a) for a in g2.adj]
    order = sorted(range(n), key=lambda v: (v not in m1, -len(adj1[v])))
    image = {}
    used = set()

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if w in used or (w in m2) != (v in m1) or len(adj2[w]) != len(adj1[v]):
                continue
            if any((image[u] in adj2[w]) != (u in adj1[v]) for u in image):
                continue
            image[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del image[v]
            used.discard(w)
        return False

    return extend(0)


def rooted_ball(g: Graph, o: int, r: int) -> tuple[Graph, int]:
    sub, local = induced(g, bfs(g, [o], r))
    return sub, local[o]


def ball_classes(g: Graph, r: int) -> list[int]:
    """Isomorphism class index of every rooted radius-r ball, by pairwise search."""
    reps: list[tuple[Graph, int]] = []
    cls = []
    for o in range(g.n):
        b = rooted_ball(g, o, r)
        for i, rep in enumerate(reps):
            if marked_isomorphic(b[0], b[1], rep[0], rep[1]):
                cls.append(i)
                break
        else:
            reps.append(b)
            cls.append(len(reps) - 1)
    return cls


def tv_brute(g1: Graph, g2: Graph, r: int) -> Fraction:
    balls1 = [rooted_ball(g1, o, r) for o in range(g1.n)]
    balls2 = [rooted_ball(g2, o, r) for o in range(g2.n)]
    reps: list[tuple[Graph, int]] = []
    mass1: dict[int, Fraction] = {}
    mass2: dict[int, Fraction] = {}

    def index(b):
        for i, rep in enumerate(reps):
            if marked_isomorphic(b[0], b[1], rep[0], rep[1]):
                return i
        reps.append(b)
        return len(reps) - 1

    for b in balls1:
        i = index(b)
        mass1[i] = mass1.get(i, Fraction(0)) + Fraction(1, g1.n)
    for b in balls2:
        i = index(b)
        mass2[i] = mass2.get(i, Fraction(0)) + Fraction(1, g2.n)
    keys = set(mass1) | set(mass2)
    return sum((abs(mass1.get(c, 0) - mass2.get(c, 0)) for c in keys), Fraction(0)) / 2


def mtp_brute(g: Graph, kernel) -> tuple[Fraction, Fraction]:
    """Inflow and outflow averages by summing over all ordered pairs of vertices."""
    dist = [bfs(g, [v]) for v in range(g.n)]
    inflow = outflow = 0
    for o in range(g.n):
        for x in range(g.n):
            if x in dist[o]:
                inflow += kernel(g, x, o, dist[x][o])
                outflow += kernel(g, o, x, dist[o][x])
    return Fraction(inflow, g.n), Fraction(outflow, g.n)


def is_connected_set(g: Graph, vs) -> bool:
    vs = set(vs)
    if not vs:
        return False
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in g.adj[v]:
            if u in vs and u not in seen:
                seen.add(u)
                stack.append(u)
    return seen == vs


def connected_sets_brute(g: Graph, v: int, k: int) -> list[tuple[int, ...]]:
    others = [u for u in range(g.n) if u != v]
    out = []
    for size in range(min(k, g.n)):
        for rest in combinations(others, size):
            s = tuple(sorted((v,) + rest))
            if is_connected_set(g, s):
                out.append(s)
    return sorted(out)


def components_brute(g: Graph, cut) -> list[set[int]]:
    cut = {(min(u, v), max(u, v)) for u, v in cut}
    kept = Graph.from_edges(g.n, [e for e in g.edges if e not in cut])
    seen: set[int] = set()
    comps = []
    for v in range(g.n):
        if v not in seen:
            c = set(bfs(kept, [v]))
            seen |= c
            comps.append(c)
    return comps


def min_cut_size_brute(g: Graph, k: int) -> int:
    """Smallest number of edges whose removal leaves components of at most k vertices."""
    edges = list(g.edges)
    for size in range(len(edges) + 1):
        for combo in combinations(edges, size):
            if max(len(c) for c in components_brute(g, combo)) <= k:
                return size
    raise AssertionError("unreachable")


def ptilde_brute(g: Graph, samples, k: int, R: int):
    """Pooled pattern probabilities with classes found by isomorphism search.

    Returns a list over (root, K) of (root, K, ptilde) for every candidate set.
    """
    def neighbourhood(K):
        sub, local = induced(g, bfs(g, K, R))
        return sub, {local[x] for x in K}

    reps: list = []

    def cls(K):
        nb = neighbourhood(K)
        for i, rep in enumerate(reps):
            if marked_isomorphic(nb[0], nb[1], rep[0], rep[1]):
                return i
        reps.append(nb)
        return len(reps) - 1

    occ: dict[int, int] = {}
    real: dict[int, Fraction] = {}
    cand = {o: connected_sets_brute(g, o, k) for o in range(g.n)}
    cls_of = {}
    for o in range(g.n):
        for K in cand[o]:
            if K not in cls_of:
                cls_of[K] = cls(K)
            occ[cls_of[K]] = occ.get(cls_of[K], 0) + 1
    for cut, w in samples:
        for comp in components_brute(g, cut):
            K = tuple(sorted(comp))
            if K not in cls_of:
                cls_of[K] = cls(K)
            c = cls_of[K]
            real[c] = real.get(c, Fraction(0)) + w * len(comp)
    out = []
    for o in range(g.n):
        for K in cand[o]:
            c = cls_of[K]
            out.append((o, K, min(Fraction(1), real.get(c, Fraction(0)) / occ[c])))
    return out
