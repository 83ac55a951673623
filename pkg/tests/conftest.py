"""
Shared pytest fixtures.

Environment variables are set at module level, before any src/ imports, so
config.py turns on debug validation (every emitted path re-verified) for the
whole test session.
"""

import os

# Must be set before any shared.* imports.
os.environ.setdefault("RAINBOW_ENV", "test")

from collections.abc import Iterator
from itertools import combinations

import networkx as nx
import pytest
from fastapi.testclient import TestClient
from hypothesis import strategies as st

from rainbow.colored_graph import ColoredGraph, build
from rainbow.expansion import ForbiddenSet
from rainbow.generators import complete_graph, random_colored
from rainbow.rainbow_search import connect, reach
from rainbow.structures import RainbowPath
from shared.errors import NoConnectionError
from shared.models import SearchParams
from shared.rng import make_rng


# ── Graph helpers ───────────────────────────────────────────────────────────────

def path_graph(n: int) -> ColoredGraph:
    """0-1-2-...-(n-1), every edge its own color."""
    return build(n, [(i, i + 1, i) for i in range(n - 1)])


def star(leaves: int) -> ColoredGraph:
    """Center 0, leaves 1..leaves, rainbow."""
    return build(leaves + 1, [(0, i, i - 1) for i in range(1, leaves + 1)])


def rainbow_triangle() -> ColoredGraph:
    return build(3, [(0, 1, 0), (1, 2, 1), (0, 2, 2)])


def payload(g: ColoredGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()]}


def to_networkx(g: ColoredGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((u, v, {"color": c}) for u, v, c in g.edges())
    return h


def has_rainbow_cycle_by_subsets(g: ColoredGraph) -> bool:
    """Edge-subset enumeration: some set of distinct-color edges forms one cycle."""
    edges = g.edges()
    for k in range(3, len(edges) + 1):
        for subset in combinations(edges, k):
            if len({c for _, _, c in subset}) != k:
                continue
            h = nx.Graph((u, v) for u, v, _ in subset)
            if all(d == 2 for _, d in h.degree()) and nx.is_connected(h):
                return True
    return False


def emitted_paths(seed: int) -> Iterator[tuple[ColoredGraph, RainbowPath, ForbiddenSet]]:
    """Every path reach and connect emit for one seeded run on a small random graph.

    φ0 takes a few random vertices and colors, never the two endpoints.
    """
    g = random_colored(24, 5.0, seed=seed)
    if g.m == 0:
        return
    rng = make_rng(seed)
    u, v = (int(x) for x in rng.choice(g.n, size=2, replace=False))
    others = [x for x in range(g.n) if x not in (u, v)]
    phi0 = ForbiddenSet.of(
        g,
        vertices=rng.choice(others, size=3, replace=False).tolist(),
        colors=rng.choice(g.color_count, size=min(2, g.color_count), replace=False).tolist(),
    )
    params = SearchParams(p_c=0.5 if seed % 2 else 1.0, retries=1, seed=seed)

    for path in reach(g, u, phi0, params).paths.values():
        yield g, path, phi0
    try:
        path = connect(g, u, v, phi0, params)
    except NoConnectionError:
        return
    yield g, path, phi0


def has_rainbow_cycle_networkx(g: ColoredGraph) -> bool:
    h = to_networkx(g)
    for cycle in nx.simple_cycles(h):
        if len(cycle) < 3:
            continue
        colors = [h[a][b]["color"] for a, b in zip(cycle, cycle[1:] + cycle[:1])]
        if len(set(colors)) == len(colors):
            return True
    return False


# ── Hypothesis strategies ──────────────────────────────────────────────────────

@st.composite
def colored_graphs(draw, min_n: int = 2, max_n: int = 10, max_edges: int | None = None):
    """Random simple graphs with a greedy proper coloring."""
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges or len(pairs)))
    used: dict[int, set[int]] = {v: set() for v in range(n)}
    edges = []
    for u, v in chosen:
        c = next(c for c in range(2 * n) if c not in used[u] and c not in used[v])
        used[u].add(c)
        used[v].add(c)
        edges.append((u, v, c))
    return build(n, edges)


# ── Fixtures ────────────────────────────────────────────────────────────────────

@pytest.fixture()
def triangle() -> ColoredGraph:
    return rainbow_triangle()


@pytest.fixture(scope="session")
def k16() -> ColoredGraph:
    return complete_graph(16)


@pytest.fixture(scope="session")
def k64() -> ColoredGraph:
    return complete_graph(64)


@pytest.fixture(scope="session")
def dense_random() -> ColoredGraph:
    return random_colored(128, 40.0, seed=11)


@pytest.fixture()
def client():
    """TestClient for the HTTP front end."""
    from api.handler import app  # noqa: PLC0415

    with TestClient(app) as c:
        yield c
