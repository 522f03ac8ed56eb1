"""Edge cuts that break a graph into components of bounded size."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .generators import torus_vertex
from .graph import Graph, InstanceTooLarge, format_edge_list, parse_edge_list

EdgeCut = frozenset  # of (u, v) pairs with u < v

EXHAUSTIVE_EDGE_LIMIT = 20
DP_VERTEX_LIMIT = 16


def make_cut(edges: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    return frozenset((min(u, v), max(u, v)) for u, v in edges)


def format_cut(g: Graph, s: Iterable[tuple[int, int]]) -> str:
    """Edge-list text for a cut, with the host's ``n`` and ``M`` headers."""
    return format_edge_list(g, _check_cut(g, s))


def parse_cut(text: str, g: Graph | None = None) -> frozenset[tuple[int, int]]:
    cut = make_cut(parse_edge_list(text).edges)
    return cut if g is None else _check_cut(g, cut)


def _check_cut(g: Graph, s: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    cut = make_cut(s)
    for u, v in cut:
        if not g.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge of the graph")
    return cut


def components_after_removal(g: Graph, s: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Components of ``g`` minus ``s``, each sorted, ordered by smallest vertex."""
    cut = _check_cut(g, s)
    seen = [False] * g.n
    out = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in g.adj[v]:
                if not seen[u] and ((v, u) if v < u else (u, v)) not in cut:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        out.append(sorted(comp))
    return out


@dataclass(frozen=True)
class PartitionQuality:
    k_max: int
    cut_size: int
    n: int
    k: int | None = None

    @property
    def cut_fraction(self) -> Fraction:
        return Fraction(self.cut_size, self.n)

    @property
    def boundary_degree_mean(self) -> Fraction:
        """Expected number of cut edges at a uniform vertex, ``2|S|/|V|``."""
        return Fraction(2 * self.cut_size, self.n)

    @property
    def valid(self) -> bool:
        return self.k is None or self.k_max <= self.k

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "k_max": self.k_max,
            "cut_size": self.cut_size,
            "n": self.n,
            "cut_fraction": float(self.cut_fraction),
            "boundary_degree_mean": float(self.boundary_degree_mean),
            "valid": self.valid,
        }


def verify_partition(g: Graph, s: Iterable[tuple[int, int]], k: int | None = None) -> PartitionQuality:
    cut = _check_cut(g, s)
    comps = components_after_removal(g, cut)
    return PartitionQuality(max((len(c) for c in comps), default=0), len(cut), g.n, k)


# ---------------------------------------------------------------------------
# exact oracle


def _connected_blocks(g: Graph, vertices: list[int], k: int) -> dict[int, list[tuple[int, int]]]:
    """Connected vertex sets of size <= k inside ``vertices``, keyed by their lowest vertex.

    Each block is returned as ``(bitmask, internal edge count)`` over the local
    index of ``vertices``.
    """
    local = {v: i for i, v in enumerate(vertices)}
    nbr = [0] * len(vertices)
    for v in vertices:
        for u in g.adj[v]:
            if u in local:
                nbr[local[v]] |= 1 << local[u]
    blocks: dict[int, list[tuple[int, int]]] = {}
    for low in range(len(vertices)):
        allowed = ~((1 << low) - 1)
        found = set()
        stack = [1 << low]
        while stack:
            mask = stack.pop()
            if mask in found:
                continue
            found.add(mask)
            if bin(mask).count("1") == k:
                continue
            frontier = 0
            m = mask
            while m:
                b = m & -m
                frontier |= nbr[b.bit_length() - 1]
                m ^= b
            frontier &= allowed & ~mask
            while frontier:
                b = frontier & -frontier
                stack.append(mask | b)
                frontier ^= b
        out = []
        for mask in found:
            internal = 0
            m = mask
            while m:
                b = m & -m
                internal += bin(nbr[b.bit_length() - 1] & mask).count("1")
                m ^= b
            out.append((mask, internal // 2))
        blocks[low] = out
    return blocks


def _dp_min_cut(g: Graph, vertices: list[int], k: int, forced_in: set, forced_out: set) -> int | None:
    """Minimum cut size on one component subject to forced decisions (None if infeasible)."""
    local = {v: i for i, v in enumerate(vertices)}
    comp_edges = [(local[u], local[v]) for u, v in g.edges if u in local]
    must_cut = [(1 << a) | (1 << b) for a, b in ((local[u], local[v]) for u, v in forced_in)]
    must_keep = [((1 << a), (1 << b)) for a, b in ((local[u], local[v]) for u, v in forced_out)]
    blocks = _connected_blocks(g, vertices, k)
    ok_blocks: dict[int, list[tuple[int, int]]] = {}
    for low, items in blocks.items():
        good = []
        for mask, internal in items:
            if any(mask & pair == pair for pair in must_cut):
                continue
            if any(bool(mask & a) != bool(mask & b) for a, b in must_keep):
                continue
            good.append((mask, internal))
        ok_blocks[low] = good
    full = (1 << len(vertices)) - 1
    memo: dict[int, int | None] = {0: 0}

    def best_internal(mask: int) -> int | None:
        # maximum number of edges kept inside blocks that tile ``mask``
        if mask in memo:
            return memo[mask]
        low = (mask & -mask).bit_length() - 1
        result = None
        for block, internal in ok_blocks[low]:
            if block & mask == block:
                rest = best_internal(mask ^ block)
                if rest is not None and (result is None or internal + rest > result):
                    result = internal + rest
        memo[mask] = result
        return result

    kept = best_internal(full)
    return None if kept is None else len(comp_edges) - kept


def _oracle_component_dp(g: Graph, vertices: list[int], k: int) -> list[tuple[int, int]]:
    vs = set(vertices)
    edges = [e for e in g.edges if e[0] in vs]
    best = _dp_min_cut(g, vertices, k, set(), set())
    chosen: set = set()
    dropped: set = set()
    # greedy lexicographic completion: take each edge whenever an optimal cut still allows it
    for e in edges:
        if len(chosen) == best:
            dropped.add(e)
            continue
        if _dp_min_cut(g, vertices, k, chosen | {e}, dropped) == best:
            chosen.add(e)
        else:
            dropped.add(e)
    return sorted(chosen)


def _valid_cut_on(vertices: list[int], edges: list[tuple[int, int]], removed: set, k: int) -> bool:
    parent = {v: v for v in vertices}
    size = {v: 1 for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        if e in removed:
            continue
        a, b = find(e[0]), find(e[1])
        if a != b:
            if size[a] + size[b] > k:
                return False
            parent[a] = b
            size[b] += size[a]
    return True


def _oracle_component_exhaustive(g: Graph, vertices: list[int], k: int) -> list[tuple[int, int]]:
    vs = set(vertices)
    edges = [e for e in g.edges if e[0] in vs]
    for size in range(len(edges) + 1):
        for combo in combinations(edges, size):
            if _valid_cut_on(vertices, edges, set(combo), k):
                return list(combo)
    raise AssertionError("removing every edge is always valid")


def brute_force_optimal_cut(g: Graph, k: int, mode: str = "auto") -> frozenset[tuple[int, int]]:
    """Minimum-cardinality cut leaving components of at most ``k`` vertices.

    Ties are broken towards the lexicographically smallest sorted edge list.
    Components are solved independently (the lexicographic order of a union
    of disjoint per-component choices is decided by the smallest element of
    the symmetric difference, so per-component minima combine). ``mode`` is
    ``"exhaustive"`` (subset search, needs |E| <= 20), ``"dp"`` (connected-block
    dynamic programme, needs |V| <= 16) or ``"auto"``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if mode == "auto":
        mode = "dp" if g.n <= DP_VERTEX_LIMIT else "exhaustive"
    if mode == "dp" and g.n > DP_VERTEX_LIMIT:
        raise InstanceTooLarge(f"dp oracle needs |V| <= {DP_VERTEX_LIMIT}, got {g.n}")
    if mode == "exhaustive" and g.num_edges > EXHAUSTIVE_EDGE_LIMIT:
        raise InstanceTooLarge(f"exhaustive oracle needs |E| <= {EXHAUSTIVE_EDGE_LIMIT}, got {g.num_edges}")
    if mode not in ("dp", "exhaustive"):
        raise ValueError(f"unknown oracle mode {mode!r}")
    solve = _oracle_component_dp if mode == "dp" else _oracle_component_exhaustive
    cut: list[tuple[int, int]] = []
    for comp in g.components():
        if len(comp) > k:
            cut.extend(solve(g, comp, k))
    return make_cut(cut)


# ---------------------------------------------------------------------------
# constructive partitioners


def _cut_from_labels(g: Graph, piece: list[int]) -> frozenset[tuple[int, int]]:
    return frozenset((u, v) for u, v in g.edges if piece[u] != piece[v])


def greedy_ball_partition(g: Graph, k: int) -> frozenset[tuple[int, int]]:
    """Carve BFS pieces of at most ``k`` vertices, seeding at the lowest unassigned id."""
    if k < 1:
        raise ValueError("k must be at least 1")
    piece = [-1] * g.n
    label = 0
    for seed in range(g.n):
        if piece[seed] >= 0:
            continue
        _grow_piece(g, seed, k, piece, label, None)
        label += 1
    return _cut_from_labels(g, piece)


def _grow_piece(g: Graph, seed: int, k: int, piece: list[int], label: int, rng) -> None:
    piece[seed] = label
    taken = 1
    queue = deque([seed])
    while queue and taken < k:
        v = queue.popleft()
        nbrs = list(g.adj[v])
        if rng is not None:
            rng.shuffle(nbrs)
        for u in nbrs:
            if piece[u] < 0:
                piece[u] = label
                taken += 1
                queue.append(u)
                if taken == k:
                    break


def random_shifted_partition(g: Graph, k: int, seed: int | None = None) -> frozenset[tuple[int, int]]:
    """Greedy BFS carving with a seed-determined vertex order and neighbour order."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = np.random.default_rng(seed)
    order = rng.permutation(g.n).tolist()
    piece = [-1] * g.n
    label = 0
    for v in order:
        if piece[v] >= 0:
            continue
        _grow_piece(g, v, k, piece, label, rng)
        label += 1
    return _cut_from_labels(g, piece)


def grid_block_cut(side: int, block: int) -> frozenset[tuple[int, int]]:
    """Axis-aligned ``block x block`` squares on the ``side x side`` torus."""
    if block < 1 or side % block:
        raise ValueError(f"block size {block} must divide side {side}")
    cut = []
    for i in range(side):
        for j in range(side):
            v = torus_vertex(side, i, j)
            if (j + 1) % block == 0 and block < side:
                cut.append((v, torus_vertex(side, i, j + 1)))
            if (i + 1) % block == 0 and block < side:
                cut.append((v, torus_vertex(side, i + 1, j)))
    return make_cut(cut)


@dataclass(frozen=True)
class CutEnsemble:
    """Finite mixture of valid cuts; weights are positive and sum to one."""

    samples: tuple[tuple[frozenset, Fraction], ...]
    k: int

    def __post_init__(self):
        if not self.samples:
            raise ValueError("ensemble needs at least one sample")
        if any(w <= 0 for _, w in self.samples):
            raise ValueError("weights must be positive")
        if sum(w for _, w in self.samples) != 1:
            raise ValueError("weights must sum to 1")

    @property
    def cuts(self) -> list[frozenset]:
        return [s for s, _ in self.samples]

    def mean_cut_size(self) -> Fraction:
        return sum((w * len(s) for s, w in self.samples), Fraction(0))

    def check(self, g: Graph) -> None:
        for idx, (s, _) in enumerate(self.samples):
            q = verify_partition(g, s, self.k)
            if not q.valid:
                raise ValueError(f"sample {idx} leaves a component of size {q.k_max} > k={self.k}")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "samples": [
                {"weight": f"{w.numerator}/{w.denominator}", "edges": [list(e) for e in sorted(s)]}
                for s, w in self.samples
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CutEnsemble":
        samples = tuple(
            (make_cut(tuple(e) for e in item["edges"]), Fraction(str(item["weight"])))
            for item in data["samples"]
        )
        return cls(samples, int(data["k"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def build_ensemble(g: Graph, k: int, n_samples: int, seed: int | None = None) -> CutEnsemble:
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    seeds = np.random.SeedSequence(seed).spawn(n_samples)
    w = Fraction(1, n_samples)
    samples = tuple(
        (random_shifted_partition(g, k, int(ss.generate_state(1)[0])), w) for ss in seeds
    )
    return CutEnsemble(samples, k)
