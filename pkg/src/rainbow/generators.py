"""
Reference graph families with proper edge colorings.

- hypercube: Q_d with the coordinate coloring, which has no rainbow cycle.
- jung_union: disjoint complete bipartite graphs (Latin-square colored, one palette).
- complete_graph: K_n with the round-robin 1-factorization.
- random_colored: G(n, p) plus a greedy proper edge coloring.

All generators are pure functions of their arguments (and seed).
"""

import logging

import numpy as np

from rainbow.colored_graph import ColoredGraph, build
from shared.config import HYPERCUBE_MAX_DIM
from shared.errors import DimensionOutOfRangeError, SizeOverflowError
from shared.models import GenSpec
from shared.rng import make_rng

logger = logging.getLogger(__name__)

_MAX_EDGES = 1 << 27


def hypercube(d: int) -> ColoredGraph:
    """Q_d on bitmask vertices; the edge flipping coordinate i has color i."""
    if not 1 <= d <= HYPERCUBE_MAX_DIM:
        raise DimensionOutOfRangeError(
            f"Hypercube dimension must be in [1, {HYPERCUBE_MAX_DIM}], got {d}"
        )
    n = 1 << d
    ids = np.arange(n, dtype=np.int64)
    parts = []
    for i in range(d):
        low = ids[((ids >> i) & 1) == 0]
        parts.append(np.stack([low, low | (1 << i), np.full_like(low, i)], axis=1))
    return build(n, np.concatenate(parts).tolist())


def jung_union(copies: int, side: int) -> ColoredGraph:
    """``copies`` disjoint K_{side,side}; edge (i, j) of a copy gets color (i + j) mod side."""
    if copies < 1 or side < 1:
        raise SizeOverflowError(f"copies and side must be >= 1, got {copies}, {side}")
    if copies * side * side > _MAX_EDGES:
        raise SizeOverflowError(f"{copies} copies of K_{{{side},{side}}} exceed the edge budget")

    i, j = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    i, j = i.ravel(), j.ravel()
    color = (i + j) % side
    parts = []
    for k in range(copies):
        base = 2 * side * k
        parts.append(np.stack([base + i, base + side + j, color], axis=1))
    return build(2 * side * copies, np.concatenate(parts).tolist())


def complete_graph(n: int) -> ColoredGraph:
    """K_n with a round-robin proper coloring.

    Even n: n−1 colors, each a perfect matching (vertex n−1 is the rotation
    fixed point). Odd n: n colors, edge {i, j} gets (i + j) mod n.
    """
    if n < 1:
        raise SizeOverflowError(f"n must be >= 1, got {n}")
    if n * (n - 1) // 2 > _MAX_EDGES:
        raise SizeOverflowError(f"K_{n} exceeds the edge budget")

    i, j = np.triu_indices(n, k=1)
    if n % 2 == 1:
        color = (i + j) % n
    else:
        mod = n - 1
        color = np.where(j == n - 1, (2 * i) % mod, (i + j) % mod)
    return build(n, np.stack([i, j, color], axis=1).tolist())


def random_colored(n: int, target_avg_degree: float, seed: int) -> ColoredGraph:
    """G(n, p) with p = target/(n−1), then greedy coloring in random edge order.

    Each edge takes the smallest color absent at both endpoints, so at most
    2Δ−1 colors are used. Out-of-range targets clamp p into [0, 1].
    """
    rng = make_rng(seed)
    if n < 2:
        return build(max(n, 0), [])
    p = min(max(target_avg_degree / (n - 1), 0.0), 1.0)

    heads, tails = [], []
    for a in range(n - 1):
        hits = np.flatnonzero(rng.random(n - 1 - a) < p) + a + 1
        heads.append(np.full(len(hits), a, dtype=np.int64))
        tails.append(hits)
    us = np.concatenate(heads).tolist()
    vs = np.concatenate(tails).tolist()

    # Per-vertex bitmask of used colors; lowest zero bit of (used[a] | used[b]).
    used = [0] * n
    edges = []
    for k in rng.permutation(len(us)).tolist():
        a, b = us[k], vs[k]
        busy = used[a] | used[b]
        c = ((busy + 1) & ~busy).bit_length() - 1
        bit = 1 << c
        used[a] |= bit
        used[b] |= bit
        edges.append((a, b, c))

    g = build(n, edges)
    logger.debug("random_colored(n=%d, target=%s, seed=%d) -> %r", n, target_avg_degree, seed, g)
    return g


def generate(spec: GenSpec) -> ColoredGraph:
    match spec.family:
        case "hypercube":
            return hypercube(spec.d)
        case "jung_union":
            return jung_union(spec.copies, spec.side)
        case "complete":
            return complete_graph(spec.n)
        case "random":
            return random_colored(spec.n, spec.target_avg_degree, spec.seed)
    raise ValueError(f"Unknown family: {spec.family!r}")
