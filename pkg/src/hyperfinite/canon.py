"""Exact canonical labeling of small vertex-coloured graphs.

Colour refinement seeded by the caller's vertex classes, followed by an
individualisation-refinement search over the residual symmetry. The search
keeps the lexicographically smallest leaf certificate and prunes children
that lie in the same orbit of the automorphisms discovered so far (only
automorphisms fixing the current path pointwise are used at a node).
"""

from __future__ import annotations

import struct
from typing import Sequence

from .graph import InstanceTooLarge

DEFAULT_SIZE_LIMIT = 512


def refine(adj: Sequence[Sequence[int]], colors: list[int]) -> list[int]:
    """Equitable refinement of a dense-ranked colouring.

    New colours are ranks of ``(old colour, sorted neighbour colours)`` so the
    relative order of existing cells is preserved and the result depends only
    on the isomorphism type of the coloured graph.
    """
    n = len(colors)
    ncol = len(set(colors))
    while ncol < n:
        get = colors.__getitem__
        sigs = [(c, tuple(sorted(map(get, nbrs)))) for c, nbrs in zip(colors, adj)]
        uniq = sorted(set(sigs))
        if len(uniq) == ncol:
            break
        index = {s: i for i, s in enumerate(uniq)}
        colors = [index[s] for s in sigs]
        ncol = len(uniq)
    return colors


def _rank(values: Sequence) -> list[int]:
    index = {x: i for i, x in enumerate(sorted(set(values)))}
    return [index[x] for x in values]


def _individualize(colors: list[int], w: int) -> list[int]:
    out = [2 * c for c in colors]
    out[w] -= 1
    return _rank(out)


class _Orbits:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class _Search:
    def __init__(self, adj, init):
        self.adj = adj
        self.init = init
        self.n = len(adj)
        self.first = None  # (cert, inverse labeling, path)
        self.best = None
        self.generators: list[list[int]] = []

    def leaf_certificate(self, colors):
        n = self.n
        inv = [0] * n
        for v, c in enumerate(colors):
            inv[c] = v
        classes = tuple(self.init[inv[i]] for i in range(n))
        edges = []
        for v in range(n):
            a = colors[v]
            for u in self.adj[v]:
                b = colors[u]
                if a < b:
                    edges.append(a * n + b)
        edges.sort()
        return (classes, tuple(edges)), inv

    def automorphism(self, ref_inv, cur_inv) -> list[int]:
        gamma = [0] * self.n
        for label, v in enumerate(ref_inv):
            gamma[v] = cur_inv[label]
        return gamma

    def visit(self, colors: list[int], path: list[int]):
        n = self.n
        if len(set(colors)) == n:
            cert, inv = self.leaf_certificate(colors)
            if self.first is None:
                self.first = self.best = (cert, inv, path)
                return None
            for ref in (self.first, self.best):
                if cert == ref[0]:
                    self.generators.append(self.automorphism(ref[1], inv))
                    common = 0
                    for a, b in zip(path, ref[2]):
                        if a != b:
                            break
                        common += 1
                    return common
            if cert < self.best[0]:
                self.best = (cert, inv, path)
            return None

        # first non-singleton cell
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        cell = [v for v in range(n) if colors[v] == target]
        depth = len(path)
        explored: list[int] = []
        for w in cell:
            if explored:
                orbits = _Orbits(cell)
                for g in self.generators:
                    if all(g[p] == p for p in path):
                        for x in cell:
                            orbits.union(x, g[x])
                rw = orbits.find(w)
                if any(orbits.find(e) == rw for e in explored):
                    continue
            explored.append(w)
            child = refine(self.adj, _individualize(colors, w))
            jump = self.visit(child, path + [w])
            if jump is not None and jump < depth:
                return jump
        return None


def canonical_labeling(
    adj: Sequence[Sequence[int]],
    classes: Sequence[int],
    size_limit: int = DEFAULT_SIZE_LIMIT,
    invariant: Sequence[int] | None = None,
) -> tuple[tuple, list[int]]:
    """Canonical certificate and labeling of a vertex-coloured graph.

    ``classes[v]`` is an isomorphism-relevant vertex class (root flag, mark,
    ...). Returns ``(certificate, order)`` where ``order[i]`` is the vertex
    placed at canonical position ``i``. Two coloured graphs receive equal
    certificates iff they are isomorphic by a class-preserving map.

    ``invariant`` optionally seeds the refinement with extra per-vertex values
    that every class-preserving isomorphism must respect (for example the
    distance to the root); it speeds up refinement and is not part of the
    certificate.
    """
    n = len(adj)
    if n > size_limit:
        raise InstanceTooLarge(f"graph on {n} vertices exceeds canonicalization limit {size_limit}")
    if n == 0:
        return ((), ()), []
    if invariant is None:
        seed = [(classes[v], len(adj[v])) for v in range(n)]
    else:
        seed = [(classes[v], invariant[v], len(adj[v])) for v in range(n)]
    start = refine(adj, _rank(seed))
    search = _Search(adj, list(classes))
    search.visit(start, [])
    cert, inv, _ = search.best
    return cert, list(inv)


def encode_certificate(kind: int, cert: tuple) -> bytes:
    """Serialise a certificate to a byte string; ``kind`` separates code families."""
    classes, edges = cert
    n = len(classes)
    width = "H" if n < 1 << 16 else "I"
    pairs = []
    for e in edges:
        pairs.extend(divmod(e, n))
    return b"".join(
        (
            struct.pack("<BBI", kind, 1 if width == "H" else 2, n),
            struct.pack(f"<{n}B", *classes),
            struct.pack(f"<{len(pairs)}{width}", *pairs),
        )
    )
