"""
ω-maximal subgraphs: vertex sets maximizing d(H)/ω(v(H)).

Only induced subgraphs are considered (for a fixed vertex set the induced
subgraph has the largest average degree) and sets of fewer than two vertices
are excluded, since ω = log2 vanishes at 1.

``extract_maximal`` is a min-degree peeling heuristic; ``brute_force_maximal``
enumerates every subset for graphs of up to 20 vertices and is the test oracle.
"""

import heapq
import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from rainbow.colored_graph import ColoredGraph, induced_subgraph
from shared.config import BRUTE_FORCE_MAX_VERTICES
from shared.errors import NoEdgesError, TooLargeError, TooSmallError

logger = logging.getLogger(__name__)

RATIO_TOLERANCE = 1e-12


@dataclass(frozen=True)
class OmegaFunction:
    kind: Literal["log2", "power"] = "log2"
    alpha: float = 0.5

    def __post_init__(self) -> None:
        if self.kind == "power" and not 0.0 < self.alpha < 1.0:
            raise ValueError(f"power ω needs alpha in (0, 1), got {self.alpha}")

    def __call__(self, x: float) -> float:
        if self.kind == "log2":
            return math.log2(x)
        return x ** self.alpha

    def vectorized(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "log2":
            return np.log2(x)
        return np.power(x, self.alpha)


LOG2 = OmegaFunction("log2")


@dataclass(frozen=True)
class OmegaResult:
    vertices: tuple[int, ...]   # sorted
    ratio: float
    certified_optimal: bool

    def as_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "ratio": self.ratio,
            "certified_optimal": self.certified_optimal,
        }


# ── Ratio arithmetic ──────────────────────────────────────────────────────────

def _ratio(edges: int, k: int, omega: OmegaFunction) -> float:
    return (2 * edges / k) / omega(k)


def compare_ratios(e1: int, k1: int, e2: int, k2: int, omega: OmegaFunction) -> int:
    """Sign of d1/ω(k1) − d2/ω(k2), via d1·ω(k2) vs d2·ω(k1) with a 1e-12 tie band."""
    lhs = (2 * e1 / k1) * omega(k2)
    rhs = (2 * e2 / k2) * omega(k1)
    tol = RATIO_TOLERANCE * max(1.0, abs(lhs), abs(rhs))
    if lhs > rhs + tol:
        return 1
    if lhs < rhs - tol:
        return -1
    return 0


def _beats(e1: int, k1: int, e2: int, k2: int, omega: OmegaFunction) -> bool:
    """Strictly better ratio, or a tie on a smaller vertex set."""
    cmp = compare_ratios(e1, k1, e2, k2, omega)
    return cmp > 0 or (cmp == 0 and k1 < k2)


def omega_ratio(g: ColoredGraph, omega: OmegaFunction = LOG2) -> float:
    if g.n < 2:
        raise TooSmallError(f"ω-ratio needs at least 2 vertices, got {g.n}")
    return _ratio(g.m, g.n, omega)


# ── Peeling heuristic ─────────────────────────────────────────────────────────

def _peel(g: ColoredGraph, members: np.ndarray, omega: OmegaFunction) -> np.ndarray:
    """One min-degree peeling pass over ``members``; returns the best suffix."""
    alive = np.zeros(g.n, dtype=bool)
    alive[members] = True
    src, dst = g.arc_src, g.indices
    inner = alive[src] & alive[dst]
    deg = np.bincount(src[inner], minlength=g.n).tolist()
    edges = int(inner.sum()) // 2
    k = len(members)

    ptr = g.indptr.tolist()
    nbrs = g.indices.tolist()
    flags = alive.tolist()
    heap = [(deg[v], v) for v in members.tolist()]
    heapq.heapify(heap)

    best_edges, best_k, best_step = edges, k, 0
    removed: list[int] = []
    while k > 2:
        d, v = heapq.heappop(heap)
        if not flags[v] or d != deg[v]:
            continue
        flags[v] = False
        removed.append(v)
        for u in nbrs[ptr[v]:ptr[v + 1]]:
            if flags[u]:
                deg[u] -= 1
                edges -= 1
                heapq.heappush(heap, (deg[u], u))
        k -= 1
        if _beats(edges, k, best_edges, best_k, omega):
            best_edges, best_k, best_step = edges, k, len(removed)

    keep = alive.copy()
    keep[removed[:best_step]] = False
    return np.flatnonzero(keep)


def extract_maximal(g: ColoredGraph, omega: OmegaFunction = LOG2) -> OmegaResult:
    """Iterated peeling: restart on the best suffix until a pass stops improving."""
    if g.n < 2:
        raise TooSmallError(f"Need at least 2 vertices, got {g.n}")
    if g.m == 0:
        raise NoEdgesError("Graph has no edges")

    members = np.arange(g.n, dtype=np.int64)
    current_edges = g.m
    passes = 0
    while True:
        passes += 1
        suffix = _peel(g, members, omega)
        sub, _ = induced_subgraph(g, suffix.tolist())
        if len(suffix) == len(members) or not _beats(
            sub.m, sub.n, current_edges, len(members), omega
        ):
            break
        members, current_edges = suffix, sub.m

    ratio = _ratio(current_edges, len(members), omega)
    logger.debug("extract_maximal: %d passes, %d/%d vertices, ratio %.6f", passes, len(members), g.n, ratio)
    return OmegaResult(tuple(members.tolist()), ratio, certified_optimal=False)


# ── Exhaustive oracle ─────────────────────────────────────────────────────────

def _subset_edge_counts(g: ColoredGraph) -> tuple[np.ndarray, np.ndarray]:
    """Induced edge count and size for every vertex bitmask of g."""
    total = 1 << g.n
    masks = np.arange(total, dtype=np.int64)
    edges = np.zeros(total, dtype=np.int64)
    for v in range(g.n):
        adj = 0
        for u in g.neighbors(v).tolist():
            adj |= 1 << u
        lo, hi = 1 << v, 1 << (v + 1)
        edges[lo:hi] = edges[:lo] + np.bitwise_count(masks[lo:hi] & adj)
    sizes = np.bitwise_count(masks).astype(np.int64)
    return edges, sizes


def _subset_ratios(g: ColoredGraph, omega: OmegaFunction) -> tuple[np.ndarray, np.ndarray]:
    edges, sizes = _subset_edge_counts(g)
    ratios = np.full(len(edges), -np.inf)
    ok = sizes >= 2
    ratios[ok] = (2.0 * edges[ok] / sizes[ok]) / omega.vectorized(sizes[ok].astype(float))
    return ratios, sizes


def _members(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def brute_force_maximal(g: ColoredGraph, omega: OmegaFunction = LOG2) -> OmegaResult:
    """Exact argmax over all subsets; ties go to the smaller, then lexicographically first set."""
    if g.n > BRUTE_FORCE_MAX_VERTICES:
        raise TooLargeError(
            f"Exhaustive search is limited to {BRUTE_FORCE_MAX_VERTICES} vertices, got {g.n}"
        )
    if g.n < 2:
        raise TooSmallError(f"Need at least 2 vertices, got {g.n}")

    ratios, sizes = _subset_ratios(g, omega)
    best = float(ratios.max())
    tied = np.flatnonzero(ratios >= best - RATIO_TOLERANCE * max(1.0, abs(best)))
    min_size = int(sizes[tied].min())
    winners = [_members(int(m)) for m in tied[sizes[tied] == min_size].tolist()]
    chosen = min(winners)
    return OmegaResult(chosen, best, certified_optimal=True)


def verify_maximal(
    g: ColoredGraph, vertices: tuple[int, ...] | list[int], omega: OmegaFunction = LOG2
) -> bool:
    """True iff no subset of ``vertices`` (size >= 2) beats the ratio of the whole set."""
    sub, _ = induced_subgraph(g, vertices)
    if sub.n > BRUTE_FORCE_MAX_VERTICES:
        raise TooLargeError(f"Re-verification is limited to {BRUTE_FORCE_MAX_VERTICES} vertices")
    if sub.n < 2:
        raise TooSmallError("Need at least 2 vertices")
    ratios, _ = _subset_ratios(sub, omega)
    whole = float(ratios[-1])
    return bool(ratios.max() <= whole + RATIO_TOLERANCE * max(1.0, abs(whole)))


def check_min_degree(g: ColoredGraph, omega: OmegaFunction = LOG2) -> bool:
    """δ(g) ≥ d(g)/2, evaluated exactly as δ·n ≥ m.

    The bound holds for every ω-maximal graph with ω increasing; the check
    itself does not depend on ω.
    """
    if g.n < 2:
        raise TooSmallError(f"Need at least 2 vertices, got {g.n}")
    return int(g.degrees.min()) * g.n >= g.m
