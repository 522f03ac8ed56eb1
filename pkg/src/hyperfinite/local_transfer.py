"""Local randomized transfer of bounded-component cuts between graphs.

Pattern statistics learned from an ensemble of cuts on a source graph are
turned into a cut on a target graph using only bounded-radius neighbourhoods
and independent coin flips per candidate component.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .canon import DEFAULT_SIZE_LIMIT, canonical_labeling
from .graph import Graph, InstanceTooLarge
from .partitioners import (
    CutEnsemble,
    PartitionQuality,
    build_ensemble,
    components_after_removal,
    make_cut,
    verify_partition,
)
from .rng import keyed_uniform
from .rooted_graphs import canonical_code_marked, neighborhood_of_set

log = logging.getLogger(__name__)

DEFAULT_SET_LIMIT = 200_000


# ---------------------------------------------------------------------------
# candidate components


def enumerate_connected_sets(
    g: Graph, v: int, k: int, min_vertex: bool = False, limit: int | None = DEFAULT_SET_LIMIT
) -> list[tuple[int, ...]]:
    """All connected vertex sets of size at most ``k`` containing ``v``.

    Sets are sorted tuples in lexicographic order. With ``min_vertex`` only sets
    whose smallest vertex is ``v`` are produced, which partitions the global
    family by smallest member. Raises :class:`InstanceTooLarge` past ``limit``.
    """
    g.check_vertex(v)
    if k < 1:
        raise ValueError("k must be at least 1")
    adj = g.adj
    out: list[tuple[int, ...]] = []
    base_banned = set(range(v)) if min_vertex else set()

    def grow(sub: list[int], members: set[int], frontier: list[int], banned: set[int]) -> None:
        out.append(tuple(sorted(sub)))
        if limit is not None and len(out) > limit:
            raise InstanceTooLarge(
                f"more than {limit} connected sets of size <= {k} around vertex {v}"
            )
        if len(sub) == k:
            return
        banned = set(banned)
        for i, w in enumerate(frontier):
            rest = frontier[i + 1:]
            seen = members | banned | set(rest) | {w}
            grown = rest + [u for u in adj[w] if u not in seen]
            members.add(w)
            sub.append(w)
            grow(sub, members, grown, banned)
            sub.pop()
            members.discard(w)
            banned.add(w)

    start = [u for u in adj[v] if u not in base_banned]
    grow([v], {v}, start, base_banned)
    out.sort()
    return out


def component_of(g: Graph, s: Iterable[tuple[int, int]], v: int) -> tuple[int, ...]:
    """Vertex set of the component of ``v`` once the edges in ``s`` are removed."""
    cut = make_cut(s)
    g.check_vertex(v)
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for u in g.adj[x]:
            if u not in seen and ((x, u) if x < u else (u, x)) not in cut:
                seen.add(u)
                stack.append(u)
    return tuple(sorted(seen))


class PatternCoder:
    """Cached canonical codes of marked neighbourhoods ``(N_R(K), K)`` in one graph."""

    def __init__(self, g: Graph, size_limit: int = DEFAULT_SIZE_LIMIT):
        self.g = g
        self.size_limit = size_limit
        self._cache: dict[tuple[tuple[int, ...], int], bytes] = {}

    def __call__(self, K: tuple[int, ...], R: int) -> bytes:
        key = (K, R)
        code = self._cache.get(key)
        if code is None:
            code = canonical_code_marked(neighborhood_of_set(self.g, K, R), self.size_limit)
            self._cache[key] = code
        return code


# ---------------------------------------------------------------------------
# conditional pattern probabilities


@dataclass
class ComponentStats:
    """Estimated probability that a candidate set is the realised component.

    ``realized[c]`` is the weighted number of sampled (root, cut) pairs whose
    component has pattern ``c``; ``occurrences[c]`` counts candidate sets with
    pattern ``c`` around the sampled roots. Codes absent from the table read
    as probability 1.
    """

    k: int
    R: int
    realized: dict[bytes, Fraction] = field(default_factory=dict)
    occurrences: dict[bytes, int] = field(default_factory=dict)

    default = Fraction(1)

    def ptilde(self, code: bytes) -> Fraction:
        occ = self.occurrences.get(code)
        if not occ:
            return self.default
        return min(Fraction(1), self.realized.get(code, Fraction(0)) / occ)

    @property
    def table(self) -> dict[bytes, Fraction]:
        return {c: self.ptilde(c) for c in self.occurrences}

    def to_json(self) -> dict:
        entries = []
        for code in sorted(self.occurrences):
            r = self.realized.get(code, Fraction(0))
            entries.append(
                {
                    "code": code.hex(),
                    "ptilde": float(self.ptilde(code)),
                    "occurrences": self.occurrences[code],
                    "realized": f"{r.numerator}/{r.denominator}",
                }
            )
        return {"k": self.k, "R": self.R, "default": float(self.default), "entries": entries}

    @classmethod
    def from_json(cls, data: dict) -> "ComponentStats":
        if float(data.get("default", 1.0)) != 1.0:
            raise ValueError("unseen-pattern default is fixed at 1")
        stats = cls(int(data["k"]), int(data["R"]))
        for e in data["entries"]:
            code = bytes.fromhex(e["code"])
            occ = int(e["occurrences"])
            stats.occurrences[code] = occ
            r = Fraction(e["realized"]) if "realized" in e else Fraction(e["ptilde"]) * occ
            if r:
                stats.realized[code] = r
        return stats

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _sample_roots(n: int, n_roots: int | None, seed: int | None) -> list[int]:
    if n_roots is None or n_roots >= n:
        return list(range(n))
    if n_roots < 1:
        raise ValueError("n_roots must be at least 1")
    rng = np.random.default_rng(seed)
    return sorted(rng.choice(n, size=n_roots, replace=False).tolist())


class PatternSurvey:
    """Candidate sets and realised components around a fixed set of roots.

    Shared by the estimator, the radius selection and the tower-property
    checks so that all radii are evaluated on the same sample.
    """

    def __init__(
        self,
        g: Graph,
        ensemble: CutEnsemble,
        n_roots: int | None = None,
        seed: int | None = None,
        size_limit: int = DEFAULT_SIZE_LIMIT,
        set_limit: int | None = DEFAULT_SET_LIMIT,
    ):
        if not ensemble.samples:
            raise ValueError("empty ensemble")
        ensemble.check(g)
        self.g = g
        self.ensemble = ensemble
        self.k = ensemble.k
        self.roots = _sample_roots(g.n, n_roots, seed)
        self.coder = PatternCoder(g, size_limit)
        self.candidates = {o: enumerate_connected_sets(g, o, self.k, limit=set_limit) for o in self.roots}
        self.realized: list[list[tuple[tuple[int, ...], Fraction]]] = []
        comp_maps = []
        for cut, w in ensemble.samples:
            owner: dict[int, tuple[int, ...]] = {}
            for comp in components_after_removal(g, cut):
                t = tuple(comp)
                for x in comp:
                    owner[x] = t
            comp_maps.append((owner, w))
        for o in self.roots:
            self.realized.append([(owner[o], w) for owner, w in comp_maps])
        self._stats: dict[int, ComponentStats] = {}

    def stats(self, R: int) -> ComponentStats:
        if R < 0:
            raise ValueError("radius must be non-negative")
        if R not in self._stats:
            out = ComponentStats(self.k, R)
            occ: Counter = Counter()
            real: dict[bytes, Fraction] = defaultdict(Fraction)
            for o, comps in zip(self.roots, self.realized):
                for K in self.candidates[o]:
                    occ[self.coder(K, R)] += 1
                for K, w in comps:
                    real[self.coder(K, R)] += w
            out.occurrences = dict(occ)
            out.realized = dict(real)
            self._stats[R] = out
        return self._stats[R]

    def discrepancy(self, R: int) -> Fraction:
        """Mean over roots of ``sum_K |p_R(K) - p_{R+1}(K)|`` on the candidate sets."""
        lo, hi = self.stats(R), self.stats(R + 1)
        total = Fraction(0)
        for o in self.roots:
            for K in self.candidates[o]:
                total += abs(lo.ptilde(self.coder(K, R)) - hi.ptilde(self.coder(K, R + 1)))
        return total / len(self.roots)

    def refinements(self, r: int) -> dict[bytes, bytes]:
        """Map each radius-``r+1`` pattern to the radius-``r`` pattern it refines."""
        parent: dict[bytes, bytes] = {}
        for o in self.roots:
            for K in self.candidates[o]:
                fine, coarse = self.coder(K, r + 1), self.coder(K, r)
                if parent.setdefault(fine, coarse) != coarse:
                    raise AssertionError("a refined pattern maps to two coarse patterns")
        return parent


def estimate_ptilde(
    g: Graph,
    ensemble: CutEnsemble,
    R: int,
    n_roots: int | None = None,
    seed: int | None = None,
    size_limit: int = DEFAULT_SIZE_LIMIT,
) -> ComponentStats:
    """Pooled estimate of the probability that a pattern is the realised component."""
    if R <= ensemble.k:
        log.debug("R=%d does not exceed k=%d", R, ensemble.k)
    return PatternSurvey(g, ensemble, n_roots, seed, size_limit).stats(R)


@dataclass(frozen=True)
class RadiusChoice:
    R: int
    converged: bool
    discrepancies: dict[int, float]


def choose_R(
    g: Graph,
    ensemble: CutEnsemble,
    eps0: float,
    R_max: int,
    n_roots: int | None = None,
    seed: int | None = None,
    survey: PatternSurvey | None = None,
) -> RadiusChoice:
    """Smallest ``R`` in ``(k, R_max]`` whose successive-refinement discrepancy is below ``eps0``."""
    if not 0 < eps0 < 0.5:
        raise ValueError(f"eps0 must lie in (0, 1/2), got {eps0}")
    k = ensemble.k
    if R_max <= k:
        raise ValueError(f"R_max={R_max} must exceed k={k}")
    if survey is None:
        survey = PatternSurvey(g, ensemble, n_roots, seed)
    seen: dict[int, float] = {}
    for R in range(k + 1, R_max + 1):
        d = survey.discrepancy(R)
        seen[R] = float(d)
        if d < eps0:
            return RadiusChoice(R, True, seen)
    log.warning("pattern probabilities did not stabilise below %.3g up to R_max=%d", eps0, R_max)
    return RadiusChoice(R_max, False, seen)


# ---------------------------------------------------------------------------
# local cut assembly


def selection_probability(ptilde: Fraction | float, eps0: float) -> float:
    """``min{2 ln(1/eps0) * ptilde, 1}``."""
    return min(2.0 * math.log(1.0 / eps0) * float(ptilde), 1.0)


def selection_table(
    g: Graph,
    stats: ComponentStats,
    eps0: float,
    size_limit: int = DEFAULT_SIZE_LIMIT,
    set_limit: int | None = DEFAULT_SET_LIMIT,
) -> list[tuple[tuple[int, ...], float]]:
    """Every connected set of size <= k in ``g`` (once) with its firing probability."""
    if not 0 < eps0 < 0.5:
        raise ValueError(f"eps0 must lie in (0, 1/2), got {eps0}")
    coder = PatternCoder(g, size_limit)
    table = []
    for v in range(g.n):
        for K in enumerate_connected_sets(g, v, stats.k, min_vertex=True, limit=set_limit):
            table.append((K, selection_probability(stats.ptilde(coder(K, stats.R)), eps0)))
    return table


@dataclass(frozen=True)
class LocalCut:
    cut: frozenset
    boundary_edges: frozenset  # union of boundaries of the selected sets
    uncovered_edges: frozenset  # edges touching a vertex outside every selected set
    covered: frozenset  # vertices inside some selected set
    n_selected: int

    def uncovered_fraction(self, n: int) -> Fraction:
        return Fraction(n - len(self.covered), n)


def sample_local_cut(
    g: Graph,
    table: Sequence[tuple[tuple[int, ...], float]],
    seed: int,
    vertex_keys: Sequence[int] | None = None,
) -> LocalCut:
    """Flip one keyed coin per candidate set and assemble the cut.

    The coin for ``K`` is keyed by ``seed`` and the sorted keys of its vertices
    (vertex ids unless ``vertex_keys`` is given), so draws are independent
    across sets and do not depend on evaluation order.
    """
    keys = range(g.n) if vertex_keys is None else vertex_keys
    boundary: set[tuple[int, int]] = set()
    covered: set[int] = set()
    n_selected = 0
    for K, q in table:
        if q <= 0.0:
            continue
        if q < 1.0 and keyed_uniform(seed, sorted(keys[x] for x in K)) >= q:
            continue
        n_selected += 1
        members = set(K)
        covered.update(K)
        for x in K:
            for u in g.adj[x]:
                if u not in members:
                    boundary.add((x, u) if x < u else (u, x))
    uncovered = set()
    for x in range(g.n):
        if x not in covered:
            for u in g.adj[x]:
                uncovered.add((x, u) if x < u else (u, x))
    return LocalCut(
        frozenset(boundary | uncovered), frozenset(boundary), frozenset(uncovered), frozenset(covered), n_selected
    )


def local_partition(
    g_target: Graph,
    stats: ComponentStats,
    eps0: float,
    seed: int,
    vertex_keys: Sequence[int] | None = None,
) -> frozenset:
    """Cut of ``g_target`` whose components all have at most ``stats.k`` vertices."""
    table = selection_table(g_target, stats, eps0)
    return sample_local_cut(g_target, table, seed, vertex_keys).cut


def canonical_vertex_keys(g: Graph, size_limit: int = 4096) -> list[int]:
    """Canonical position of every vertex, for relabelling-equivariant coin keys."""
    _, order = canonical_labeling(g.adj, [0] * g.n, size_limit)
    keys = [0] * g.n
    for pos, v in enumerate(order):
        keys[v] = pos
    return keys


# ---------------------------------------------------------------------------
# deterministic extraction


def derandomize_cut(g: Graph, ensemble: CutEnsemble) -> frozenset:
    """Per component, keep the cheapest ensemble sample restricted to it."""
    if not ensemble.samples:
        raise ValueError("empty ensemble")
    ensemble.check(g)
    chosen: list[tuple[int, int]] = []
    for comp in g.components():
        vs = set(comp)
        best = None
        for cut, _ in ensemble.samples:
            part = sorted(e for e in cut if e[0] in vs)
            if best is None or (len(part), part) < (len(best), best):
                best = part
        chosen.extend(best)
    return make_cut(chosen)


def mixture_bounds(g: Graph, ensemble: CutEnsemble) -> list[Fraction]:
    """Per component ``|V_i|/2`` times the mean number of cut edges at a root in it.

    Computed from per-vertex cut degrees, independently of edge counting.
    """
    out = []
    for comp in g.components():
        total = Fraction(0)
        for cut, w in ensemble.samples:
            deg = sum(1 for v in comp for u in g.adj[v] if ((v, u) if v < u else (u, v)) in cut)
            total += w * deg
        mean_at_root = total / len(comp)
        out.append(Fraction(len(comp), 2) * mean_at_root)
    return out


# ---------------------------------------------------------------------------
# quality bound


def epsilon_tilde(eps: float, M: int) -> float:
    """``3 ln(2M/eps) eps``."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if M < 1:
        raise ValueError("degree bound M must be positive")
    return 3.0 * math.log(2.0 * M / eps) * eps


def raw_bound(eps: float, M: int, eps0: float | None = None) -> float:
    """``4 ln(1/eps0) eps + 3 eps0 M`` on the expected cut edges at a root (eps0 defaults to eps/(2M))."""
    if eps0 is None:
        eps0 = eps / (2.0 * M)
    return 4.0 * math.log(1.0 / eps0) * eps + 3.0 * eps0 * M


# ---------------------------------------------------------------------------
# end-to-end pipeline


@dataclass
class TransferModel:
    k: int
    M: int
    eps_base: Fraction
    eps0: float
    radius: RadiusChoice | None
    stats: ComponentStats | None


@dataclass
class TransferReport:
    eps_base: float
    eps0: float
    R: int | None
    radius_converged: bool
    cut: frozenset
    quality: PartitionQuality
    bound: float | None
    eps_tilde: float | None
    uncovered_fraction: float
    config: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "eps_base": self.eps_base,
            "eps0": self.eps0,
            "R": self.R,
            "radius_converged": self.radius_converged,
            "cut": [list(e) for e in sorted(self.cut)],
            "quality": self.quality.to_json(),
            "bound": self.bound,
            "eps_tilde": self.eps_tilde,
            "uncovered_fraction": self.uncovered_fraction,
        }


def train_transfer(
    g_source: Graph,
    k: int,
    n_samples: int,
    R_max: int,
    n_roots: int | None,
    seed: int,
    ensemble: CutEnsemble | None = None,
    size_limit: int = DEFAULT_SIZE_LIMIT,
) -> TransferModel:
    if ensemble is None:
        ensemble = build_ensemble(g_source, k, n_samples, seed)
    eps_base = ensemble.mean_cut_size() / g_source.n
    M = g_source.M
    if eps_base == 0:
        return TransferModel(k, M, eps_base, 0.0, None, None)
    eps0 = float(eps_base) / (2 * M)
    survey = PatternSurvey(g_source, ensemble, n_roots, seed, size_limit)
    choice = choose_R(g_source, ensemble, eps0, R_max, survey=survey)
    return TransferModel(k, M, eps_base, eps0, choice, survey.stats(choice.R))


def apply_transfer(
    model: TransferModel,
    g_target: Graph,
    seed: int,
    table: Sequence[tuple[tuple[int, ...], float]] | None = None,
    config: dict | None = None,
) -> TransferReport:
    if max((len(a) for a in g_target.adj), default=0) > model.M:
        raise ValueError(f"target degree exceeds the source bound M={model.M}")
    if model.stats is None:
        # source ensemble cut nothing: only a target that already has small components is accepted
        quality = verify_partition(g_target, frozenset(), model.k)
        if not quality.valid:
            raise ValueError("eps_base is 0 but the target has a component larger than k")
        return TransferReport(0.0, 0.0, None, True, frozenset(), quality, None, None, 0.0, dict(config or {}))
    if table is None:
        table = selection_table(g_target, model.stats, model.eps0)
    local = sample_local_cut(g_target, table, seed)
    quality = verify_partition(g_target, local.cut, model.k)
    eps = float(model.eps_base)
    return TransferReport(
        eps_base=eps,
        eps0=model.eps0,
        R=model.radius.R,
        radius_converged=model.radius.converged,
        cut=local.cut,
        quality=quality,
        bound=raw_bound(eps, model.M, model.eps0),
        eps_tilde=epsilon_tilde(eps, model.M),
        uncovered_fraction=float(local.uncovered_fraction(g_target.n)),
        config=dict(config or {}),
    )


def transfer_experiment(
    g_source: Graph,
    g_target: Graph,
    k: int,
    n_samples: int,
    R_max: int,
    n_roots: int | None,
    seed: int,
) -> TransferReport:
    """Ensemble on the source, radius choice, pattern estimates, local cut on the target."""
    model = train_transfer(g_source, k, n_samples, R_max, n_roots, seed)
    config = {"k": k, "n_samples": n_samples, "R_max": R_max, "n_roots": n_roots, "seed": seed}
    return apply_transfer(model, g_target, seed, config=config)
