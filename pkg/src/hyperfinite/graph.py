"""Finite simple undirected graphs with a declared degree bound."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


class InstanceTooLarge(ValueError):
    """Raised when an input exceeds a configured size limit."""


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the sorted tuple of neighbours of ``v``. ``M`` is the
    declared degree bound; every vertex degree must be at most ``M``.
    Instances are immutable and hashable by structure.
    """

    __slots__ = ("n", "adj", "M", "_edges")

    def __init__(self, adj: Sequence[Iterable[int]], M: int | None = None):
        rows = [tuple(sorted(set(int(u) for u in nbrs))) for nbrs in adj]
        n = len(rows)
        for v, nbrs in enumerate(rows):
            for u in nbrs:
                if u == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if not 0 <= u < n:
                    raise ValueError(f"neighbour {u} of {v} out of range")
        for v, nbrs in enumerate(rows):
            for u in nbrs:
                # membership in a sorted tuple; degrees are small
                if v not in rows[u]:
                    raise ValueError(f"adjacency not symmetric for edge ({v}, {u})")
        maxdeg = max((len(r) for r in rows), default=0)
        if M is None:
            M = maxdeg
        if maxdeg > M:
            raise ValueError(f"maximum degree {maxdeg} exceeds declared bound M={M}")
        self.n = n
        self.adj = tuple(rows)
        self.M = int(M)
        self._edges = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], M: int | None = None) -> "Graph":
        rows: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if v in rows[u]:
                raise ValueError(f"parallel edge ({u}, {v})")
            rows[u].add(v)
            rows[v].add(u)
        return cls(rows, M)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges}, M={self.M})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.M == other.M and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.M, self.adj))

    def __len__(self) -> int:
        return self.n

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Sorted edge list, each edge as ``(u, v)`` with ``u < v``."""
        if self._edges is None:
            self._edges = tuple((u, v) for u in range(self.n) for v in self.adj[u] if u < v)
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.adj[u]

    def check_vertex(self, v: int) -> int:
        if not isinstance(v, (int,)) or not 0 <= v < self.n:
            raise ValueError(f"invalid vertex id {v!r} for graph on {self.n} vertices")
        return v

    def distances_from(self, sources: Iterable[int], radius: int | None = None) -> dict[int, int]:
        """BFS distances from a set of sources, truncated at ``radius``."""
        dist: dict[int, int] = {}
        queue: deque[int] = deque()
        for s in sources:
            if s not in dist:
                dist[s] = 0
                queue.append(s)
        adj = self.adj
        while queue:
            v = queue.popleft()
            d = dist[v]
            if radius is not None and d >= radius:
                continue
            for u in adj[v]:
                if u not in dist:
                    dist[u] = d + 1
                    queue.append(u)
        return dist

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = list(self.distances_from([s]))
            for v in comp:
                seen[v] = True
            out.append(sorted(comp))
        return out

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on ``vertices`` (kept in the given order).

        Returns the subgraph and the map from original ids to local ids.
        """
        local = {v: i for i, v in enumerate(vertices)}
        rows = [[local[u] for u in self.adj[v] if u in local] for v in vertices]
        return Graph(rows, self.M), local

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        rows: list[list[int]] = [[] for _ in range(self.n)]
        for v in range(self.n):
            rows[perm[v]] = [perm[u] for u in self.adj[v]]
        return Graph(rows, self.M)


def disjoint_union(*graphs: Graph) -> Graph:
    rows: list[list[int]] = []
    offset = 0
    for g in graphs:
        rows.extend([u + offset for u in nbrs] for nbrs in g.adj)
        offset += g.n
    return Graph(rows, max((g.M for g in graphs), default=0))


# ---------------------------------------------------------------------------
# edge-list text format


class EdgeListParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; ``# M=<int>`` and ``# n=<int>`` headers are honoured."""
    edges: list[tuple[int, int]] = []
    declared_m = declared_n = None
    seen: set[tuple[int, int]] = set()
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            for key in ("M", "n"):
                if body.startswith(key + "="):
                    try:
                        value = int(body[len(key) + 1:].strip())
                    except ValueError:
                        raise EdgeListParseError(f"bad {key} header {body!r}", lineno) from None
                    if key == "M":
                        declared_m = value
                    else:
                        declared_n = value
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"expected 'u v', got {raw!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer vertex in {raw!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListParseError(f"negative vertex id in {raw!r}", lineno)
        if u == v:
            raise EdgeListParseError(f"self-loop {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListParseError(f"parallel edge {key}", lineno)
        seen.add(key)
        edges.append((u, v))
        max_id = max(max_id, u, v)
    n = declared_n if declared_n is not None else max_id + 1
    if n <= max_id:
        raise EdgeListParseError(f"vertex {max_id} exceeds declared n={n}")
    try:
        return Graph.from_edges(n, edges, declared_m)
    except ValueError as exc:
        raise EdgeListParseError(str(exc)) from None


def format_edge_list(g: Graph, edges: Iterable[tuple[int, int]] | None = None) -> str:
    lines = [f"# n={g.n}", f"# M={g.M}"]
    lines.extend(f"{u} {v}" for u, v in (g.edges if edges is None else sorted(edges)))
    return "\n".join(lines) + "\n"

