import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from hyperfinite.graph import Graph  # noqa: E402


@st.composite
def small_graphs(draw, max_n=9, max_deg=4, connected=False):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    deg = [0] * n
    edges = []
    for u, v in chosen:
        if deg[u] < max_deg and deg[v] < max_deg:
            deg[u] += 1
            deg[v] += 1
            edges.append((u, v))
    if connected:
        # stitch components together along a path of representatives
        g = Graph.from_edges(n, edges)
        comps = g.components()
        for a, b in zip(comps, comps[1:]):
            edges.append((a[0], b[0]))
    return Graph.from_edges(n, edges)


def random_relabel(g: Graph, rng: random.Random):
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm), perm


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
