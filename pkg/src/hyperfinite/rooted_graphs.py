"""Balls, marked neighbourhoods, canonical codes and the rooted-graph metric."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Iterable

from .canon import DEFAULT_SIZE_LIMIT, canonical_labeling, encode_certificate
from .graph import Graph, InstanceTooLarge

ROOTED_KIND = 1
MARKED_KIND = 2


@dataclass(frozen=True)
class RootedBall:
    """Induced subgraph on ``{v : dist(v, o) <= radius}`` with the root at ``root``.

    ``vertices[i]`` is the host id of local vertex ``i``; the root is local 0.
    """

    graph: Graph
    root: int
    radius: int
    vertices: tuple[int, ...] = ()


@dataclass(frozen=True)
class MarkedBall:
    """Induced subgraph on the radius-``radius`` neighbourhood of a marked set."""

    graph: Graph
    marked: frozenset[int]
    radius: int
    vertices: tuple[int, ...] = ()


def ball(g: Graph, o: int, r: int) -> RootedBall:
    g.check_vertex(o)
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    dist = g.distances_from([o], r)
    # BFS order puts the root first
    verts = tuple(dist)
    sub, _ = g.induced(verts)
    return RootedBall(sub, 0, r, verts)


def neighborhood_of_set(g: Graph, K: Iterable[int], R: int) -> MarkedBall:
    """Induced subgraph on the union of radius-``R`` balls around ``K``."""
    ks = sorted(set(K))
    if not ks:
        raise ValueError("marked set must be nonempty")
    for v in ks:
        g.check_vertex(v)
    if R < 0:
        raise ValueError(f"radius must be non-negative, got {R}")
    kset = set(ks)
    reach = {ks[0]}
    stack = [ks[0]]
    while stack:
        v = stack.pop()
        for u in g.adj[v]:
            if u in kset and u not in reach:
                reach.add(u)
                stack.append(u)
    if len(reach) != len(kset):
        raise ValueError("marked set is not connected")
    dist = g.distances_from(ks, R)
    verts = tuple(dist)
    sub, local = g.induced(verts)
    return MarkedBall(sub, frozenset(local[v] for v in ks), R, verts)


def _distance_layers(g: Graph, sources) -> list[int]:
    dist = g.distances_from(sources)
    return [dist.get(v, -1) for v in range(g.n)]


def canonical_code_rooted(b: RootedBall, size_limit: int = DEFAULT_SIZE_LIMIT) -> bytes:
    n = b.graph.n
    if n > size_limit:
        raise InstanceTooLarge(f"ball on {n} vertices exceeds canonicalization limit {size_limit}")
    classes = [0] * n
    classes[b.root] = 1
    cert, _ = canonical_labeling(b.graph.adj, classes, size_limit, _distance_layers(b.graph, [b.root]))
    return encode_certificate(ROOTED_KIND, cert)


def canonical_code_marked(b: MarkedBall, size_limit: int = DEFAULT_SIZE_LIMIT) -> bytes:
    n = b.graph.n
    if n > size_limit:
        raise InstanceTooLarge(f"neighbourhood on {n} vertices exceeds canonicalization limit {size_limit}")
    classes = [1 if v in b.marked else 0 for v in range(n)]
    cert, _ = canonical_labeling(b.graph.adj, classes, size_limit, _distance_layers(b.graph, b.marked))
    return encode_certificate(MARKED_KIND, cert)


def code_fingerprint(code: bytes) -> int:
    """Stable 64-bit index key for a code. Equality must still compare full codes."""
    return int.from_bytes(hashlib.blake2b(code, digest_size=8).digest(), "little")


@dataclass(frozen=True)
class RootedDistance:
    """Value of the metric ``1/r`` between two finite rooted graphs.

    ``resolved`` is False when the balls agreed through ``r_max`` without
    exhausting both graphs; ``value`` is then the upper bound ``1/r_max``.
    ``agree_radius`` is the largest radius with isomorphic balls (None when the
    rooted components are isomorphic).
    """

    value: float
    resolved: bool
    agree_radius: int | None

    def __float__(self) -> float:
        return self.value


def rooted_distance(a: tuple[Graph, int], b: tuple[Graph, int], r_max: int) -> RootedDistance:
    (ga, oa), (gb, ob) = a, b
    ga.check_vertex(oa)
    gb.check_vertex(ob)
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    # radius-0 balls are single vertices and always agree
    for r in range(1, r_max + 1):
        ba, bb = ball(ga, oa, r), ball(gb, ob, r)
        if canonical_code_rooted(ba) != canonical_code_rooted(bb):
            return RootedDistance(1.0 / (r - 1) if r > 1 else math.inf, True, r - 1)
        exhausted_a = len(ga.distances_from([oa], r + 1)) == ba.graph.n
        exhausted_b = len(gb.distances_from([ob], r + 1)) == bb.graph.n
        if exhausted_a and exhausted_b:
            return RootedDistance(0.0, True, None)
    return RootedDistance(1.0 / r_max, False, r_max)
