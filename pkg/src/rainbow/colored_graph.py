"""
Finite simple graphs with a proper edge coloring.

Adjacency is stored CSR-style: per-vertex sorted neighbor slices of ``indices``
with a parallel ``colors`` array. Every undirected edge appears twice (once per
direction, an "arc"). Graphs are immutable after construction and safe to share
across workers.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from shared.config import DEBUG
from shared.errors import (
    DuplicateEdgeError,
    EmptyGraphError,
    GraphError,
    ImproperColoringError,
    SelfLoopError,
    VertexOutOfRangeError,
)

logger = logging.getLogger(__name__)

Edge = tuple[int, int, int]


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    avg_degree: Fraction   # exact 2m/n; converted to float only when reported
    min_degree: int
    max_degree: int

    def as_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "avg_degree": float(self.avg_degree),
            "avg_degree_exact": [self.avg_degree.numerator, self.avg_degree.denominator],
            "min_degree": self.min_degree,
            "max_degree": self.max_degree,
        }


class ColoredGraph:
    """Immutable properly edge-colored simple graph. Build with :func:`build`."""

    def __init__(
        self,
        n: int,
        color_count: int,
        indptr: np.ndarray,
        indices: np.ndarray,
        colors: np.ndarray,
    ) -> None:
        for arr in (indptr, indices, colors):
            arr.flags.writeable = False
        self.n = n
        self.color_count = color_count
        self.indptr = indptr
        self.indices = indices
        self.colors = colors

    # ── Basic queries ─────────────────────────────────────────────────────────

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def incident_colors(self, v: int) -> np.ndarray:
        return self.colors[self.indptr[v]:self.indptr[v + 1]]

    def color_of(self, u: int, v: int) -> int | None:
        """Color of edge uv, or None if u and v are not adjacent."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            return None
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + int(np.searchsorted(self.indices[lo:hi], v))
        if pos < hi and self.indices[pos] == v:
            return int(self.colors[pos])
        return None

    def has_edge(self, u: int, v: int) -> bool:
        return self.color_of(u, v) is not None

    def edges(self) -> list[Edge]:
        """Undirected edges as (u, v, color) with u < v, sorted."""
        keep = self.arc_src < self.indices
        return list(
            zip(
                self.arc_src[keep].tolist(),
                self.indices[keep].tolist(),
                self.colors[keep].tolist(),
            )
        )

    # ── Derived arrays (computed once, shared read-only) ──────────────────────

    @cached_property
    def arc_src(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        src.flags.writeable = False
        return src

    @cached_property
    def color_classes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(class_ptr, class_u, class_v): undirected edges grouped by color.

        Edges of color c are ``class_u[class_ptr[c]:class_ptr[c + 1]]`` paired with
        the same slice of ``class_v``.
        """
        keep = self.arc_src < self.indices
        u, v, c = self.arc_src[keep], self.indices[keep], self.colors[keep]
        order = np.argsort(c, kind="stable")
        ptr = np.zeros(self.color_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(c, minlength=self.color_count), out=ptr[1:])
        out = (ptr, u[order], v[order])
        for arr in out:
            arr.flags.writeable = False
        return out

    @cached_property
    def class_colors(self) -> np.ndarray:
        """Color of every edge in ``color_classes`` order."""
        ptr = self.color_classes[0]
        out = np.repeat(np.arange(self.color_count, dtype=np.int64), np.diff(ptr))
        out.flags.writeable = False
        return out

    def color_class(self, c: int) -> list[tuple[int, int]]:
        ptr, cu, cv = self.color_classes
        return list(zip(cu[ptr[c]:ptr[c + 1]].tolist(), cv[ptr[c]:ptr[c + 1]].tolist()))

    # ── Validation ────────────────────────────────────────────────────────────

    def check_proper(self) -> None:
        """Re-run the full invariant check; raises on the first violation."""
        _validate(self.n, np.array(self.edges(), dtype=np.int64).reshape(-1, 3))
        if len(self.colors) and int(self.colors.max()) >= self.color_count:
            raise GraphError(f"Stored color exceeds color_count={self.color_count}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.color_count == other.color_count
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.colors, other.colors)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ColoredGraph(n={self.n}, m={self.m}, colors={self.color_count})"


# ── Construction ──────────────────────────────────────────────────────────────

def _edge_at(arr: np.ndarray, i: int) -> Edge:
    u, v, c = arr[i].tolist()
    return (u, v, c)


def _validate(n: int, arr: np.ndarray) -> None:
    """Vectorized invariant checks; the error names the first offending edge."""
    if len(arr) == 0:
        return
    u, v, c = arr[:, 0], arr[:, 1], arr[:, 2]

    bad = (u < 0) | (u >= n) | (v < 0) | (v >= n)
    if bad.any():
        edge = _edge_at(arr, int(np.flatnonzero(bad)[0]))
        raise VertexOutOfRangeError(f"Edge {edge} has an endpoint outside [0, {n})", edge=list(edge))
    if (c < 0).any():
        edge = _edge_at(arr, int(np.flatnonzero(c < 0)[0]))
        raise GraphError(f"Edge {edge} has a negative color", edge=list(edge))

    loops = u == v
    if loops.any():
        edge = _edge_at(arr, int(np.flatnonzero(loops)[0]))
        raise SelfLoopError(f"Edge {edge} is a self-loop", edge=list(edge))

    keys = np.minimum(u, v) * n + np.maximum(u, v)
    order = np.argsort(keys, kind="stable")
    dup = np.flatnonzero(keys[order][1:] == keys[order][:-1])
    if len(dup):
        first, second = int(order[dup[0]]), int(order[dup[0] + 1])
        edge = _edge_at(arr, second)
        raise DuplicateEdgeError(
            f"Edge {edge} duplicates edge {_edge_at(arr, first)}", edge=list(edge)
        )

    # Each (vertex, color) pair may occur at most once across both endpoints.
    span = int(c.max()) + 1
    vc = np.concatenate([u * span + c, v * span + c])
    order = np.argsort(vc, kind="stable")
    clash = np.flatnonzero(vc[order][1:] == vc[order][:-1])
    if len(clash):
        a, b = int(order[clash[0]]) % len(arr), int(order[clash[0] + 1]) % len(arr)
        vertex = int(vc[order][clash[0]] // span)
        edge = _edge_at(arr, b)
        raise ImproperColoringError(
            f"Edges {_edge_at(arr, a)} and {edge} share color {edge[2]} at vertex {vertex}",
            edge=list(edge),
            vertex=vertex,
        )


def _from_arrays(n: int, arr: np.ndarray, color_count: int) -> ColoredGraph:
    u, v, c = arr[:, 0], arr[:, 1], arr[:, 2]
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    col = np.concatenate([c, c])
    order = np.lexsort((dst, src))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return ColoredGraph(
        n,
        color_count,
        indptr,
        dst[order].astype(np.int64),
        col[order].astype(np.int64),
    )


def build(n: int, edges: Iterable[Edge], color_count: int | None = None) -> ColoredGraph:
    """Validate and build a graph.

    color_count defaults to 1 + max color used (0 if no edges). An explicit
    color_count keeps unused trailing colors, e.g. for a reloaded induced subgraph.
    """
    if n < 0:
        raise VertexOutOfRangeError(f"Vertex count must be non-negative, got {n}")
    arr = np.array(list(edges), dtype=np.int64).reshape(-1, 3)
    _validate(n, arr)
    used = int(arr[:, 2].max()) + 1 if len(arr) else 0
    if color_count is None:
        color_count = used
    elif color_count < used:
        raise GraphError(f"color_count={color_count} is below the largest color id {used - 1}")
    g = _from_arrays(n, arr, color_count)
    logger.debug("built %r", g)
    return g


def induced_subgraph(
    g: ColoredGraph, vertices: Iterable[int]
) -> tuple[ColoredGraph, dict[int, int]]:
    """Induced subgraph on ``vertices`` and the old→new index mapping.

    New indices follow increasing old index. Color ids (and color_count) are kept
    unchanged so colors compare across parent and child.
    """
    keep_ids = np.unique(np.fromiter(vertices, dtype=np.int64))
    if len(keep_ids) and (keep_ids[0] < 0 or keep_ids[-1] >= g.n):
        raise VertexOutOfRangeError(f"Vertex set is not contained in [0, {g.n})")

    relabel = np.full(g.n, -1, dtype=np.int64)
    relabel[keep_ids] = np.arange(len(keep_ids))
    src, dst = g.arc_src, g.indices
    mask = (relabel[src] >= 0) & (relabel[dst] >= 0) & (src < dst)
    arr = np.stack([relabel[src[mask]], relabel[dst[mask]], g.colors[mask]], axis=1)

    sub = _from_arrays(len(keep_ids), arr.reshape(-1, 3), g.color_count)
    if DEBUG:
        sub.check_proper()
    return sub, {int(old): new for new, old in enumerate(keep_ids.tolist())}


def stats(g: ColoredGraph) -> GraphStats:
    if g.n == 0:
        raise EmptyGraphError("Average degree is undefined for the empty graph")
    deg = g.degrees
    return GraphStats(
        n=g.n,
        m=g.m,
        avg_degree=Fraction(2 * g.m, g.n),
        min_degree=int(deg.min()),
        max_degree=int(deg.max()),
    )
