"""Empirical neighbourhood statistics and the mass transport check on finite graphs."""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .graph import Graph
from .rooted_graphs import ball, canonical_code_rooted

EXACT_EVALUATION_LIMIT = 100_000


@dataclass
class NeighborhoodDistribution:
    """Law of the radius-``radius`` rooted ball at a uniform root.

    ``counts[code]`` is the number of sampled roots whose ball has that code;
    masses are ``counts / sample_count`` and therefore exact rationals.
    """

    radius: int
    counts: dict[bytes, int]
    sample_count: int

    def mass(self, code: bytes) -> Fraction:
        return Fraction(self.counts.get(code, 0), self.sample_count)

    @property
    def masses(self) -> dict[bytes, Fraction]:
        return {c: Fraction(k, self.sample_count) for c, k in self.counts.items()}

    def total_mass(self) -> Fraction:
        return Fraction(sum(self.counts.values()), self.sample_count)

    def to_json(self) -> dict:
        entries = []
        for code in sorted(self.counts):
            m = self.mass(code)
            entries.append({"code": code.hex(), "mass_num": m.numerator, "mass_den": m.denominator})
        return {"radius": self.radius, "sample_count": self.sample_count, "entries": entries}

    @classmethod
    def from_json(cls, data: dict) -> "NeighborhoodDistribution":
        sample_count = int(data["sample_count"])
        counts = {}
        for e in data["entries"]:
            m = Fraction(int(e["mass_num"]), int(e["mass_den"]))
            k = m * sample_count
            if k.denominator != 1:
                raise ValueError(f"mass {m} is not a multiple of 1/{sample_count}")
            counts[bytes.fromhex(e["code"])] = int(k)
        return cls(int(data["radius"]), counts, sample_count)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _count_codes(g: Graph, roots, r: int) -> Counter:
    return Counter(canonical_code_rooted(ball(g, int(o), r)) for o in roots)


def _count_chunk(args):
    g, roots, r = args
    return _count_codes(g, roots, r)


def _parallel_counts(g: Graph, roots, r: int, jobs: int) -> Counter:
    roots = list(roots)
    if jobs <= 1 or len(roots) < 2 * jobs:
        return _count_codes(g, roots, r)
    chunks = [roots[i::jobs] for i in range(jobs)]
    total: Counter = Counter()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_count_chunk, [(g, c, r) for c in chunks]):
            total.update(part)
    return total


def psi(g: Graph, r: int, jobs: int = 1) -> NeighborhoodDistribution:
    """Exact law of ``(B(o, r), o)`` for ``o`` uniform on ``V(g)``."""
    if g.n == 0:
        raise ValueError("empty graph has no uniform root")
    return NeighborhoodDistribution(r, dict(_parallel_counts(g, range(g.n), r, jobs)), g.n)


def sample_psi(
    g: Graph, r: int, n_samples: int, seed: int | None = None, exhaustive: bool = False, jobs: int = 1
) -> NeighborhoodDistribution:
    """Monte-Carlo estimate of :func:`psi` from independent uniform roots."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if exhaustive:
        if n_samples != g.n:
            raise ValueError("exhaustive sampling uses every vertex exactly once (n_samples == n)")
        return psi(g, r, jobs)
    roots = np.random.default_rng(seed).integers(0, g.n, size=n_samples)
    return NeighborhoodDistribution(r, dict(_parallel_counts(g, roots.tolist(), r, jobs)), n_samples)


def tv_distance(d1: NeighborhoodDistribution, d2: NeighborhoodDistribution) -> Fraction:
    if d1.radius != d2.radius:
        raise ValueError(f"radius mismatch: {d1.radius} vs {d2.radius}")
    codes = set(d1.counts) | set(d2.counts)
    return sum((abs(d1.mass(c) - d2.mass(c)) for c in codes), Fraction(0)) / 2


# ---------------------------------------------------------------------------
# two-point functions for the mass transport check


@dataclass(frozen=True)
class LocalFunction:
    """Non-negative integer function ``f(G, x, y)`` from a closed catalogue.

    ``radius`` bounds ``dist(x, y)`` on the support; pairs farther apart are
    never evaluated and count as zero.
    """

    name: str
    radius: int
    kernel: Callable[[Graph, int, int, int], int] = field(compare=False, repr=False)

    def __call__(self, g: Graph, x: int, y: int, dist: int) -> int:
        if dist > self.radius:
            return 0
        return self.kernel(g, x, y, dist)


def _paths3(g: Graph, x: int, y: int) -> int:
    """Number of paths x-a-b-y on four distinct vertices."""
    ny = set(g.adj[y])
    # every a next to x has x among its neighbours; drop b == x when x ~ y
    back = 1 if x in ny else 0
    return sum(len(ny.intersection(g.adj[a])) - back for a in g.adj[x] if a != y)


def local_function(label: str) -> LocalFunction:
    """Resolve a catalogue name such as ``edge``, ``deg_edge`` or ``dist_band:2``."""
    name, _, arg = label.partition(":")
    if name in ("dist_band", "deg_dist"):
        try:
            d = int(arg)
        except ValueError:
            raise ValueError(f"{name} needs an integer distance, got {arg!r}") from None
        if d < 0:
            raise ValueError("distance must be non-negative")
        if name == "dist_band":
            return LocalFunction(label, d, lambda g, x, y, dist: int(dist == d))
        return LocalFunction(label, d, lambda g, x, y, dist: len(g.adj[x]) * int(dist == d))
    if arg:
        raise ValueError(f"{name} takes no parameter")
    simple = {
        "zero": (0, lambda g, x, y, dist: 0),
        "edge": (1, lambda g, x, y, dist: int(dist == 1)),
        "deg_edge": (1, lambda g, x, y, dist: len(g.adj[x]) * int(dist == 1)),
        "tri_edge": (1, lambda g, x, y, dist: len(set(g.adj[x]) & set(g.adj[y])) if dist == 1 else 0),
        "common_nbrs": (2, lambda g, x, y, dist: len(set(g.adj[x]) & set(g.adj[y])) if dist > 0 else 0),
        "paths3": (3, lambda g, x, y, dist: _paths3(g, x, y) if dist > 0 else 0),
    }
    if name not in simple:
        raise ValueError(f"unknown local function {label!r}; catalogue: {', '.join(CATALOG)}")
    radius, kernel = simple[name]
    return LocalFunction(name, radius, kernel)


CATALOG = ("zero", "edge", "deg_edge", "tri_edge", "common_nbrs", "paths3", "dist_band:<d>", "deg_dist:<d>")


@dataclass(frozen=True)
class MTPResult:
    lhs: Fraction | float
    rhs: Fraction | float
    discrepancy: Fraction | float
    exact: bool


def mtp_check(g: Graph, f: LocalFunction | str, exact: bool | None = None) -> MTPResult:
    """Expected mass received at vs. sent from a uniform root.

    ``lhs`` averages ``sum_x f(G_o, x, o)`` and ``rhs`` averages
    ``sum_y f(G_o, o, y)`` over roots ``o``. Only vertices of the root's
    component within ``f.radius`` can contribute.
    """
    if isinstance(f, str):
        f = local_function(f)
    if g.n == 0:
        raise ValueError("empty graph")
    if exact is None:
        exact = g.n <= EXACT_EVALUATION_LIMIT
    inflow = outflow = 0
    for o in range(g.n):
        for x, d in g.distances_from([o], f.radius).items():
            inflow += f(g, x, o, d)
            outflow += f(g, o, x, d)
    if exact:
        lhs, rhs = Fraction(inflow, g.n), Fraction(outflow, g.n)
    else:
        lhs, rhs = inflow / g.n, outflow / g.n
    return MTPResult(lhs, rhs, abs(lhs - rhs), exact)
