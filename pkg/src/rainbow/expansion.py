"""
Restricted external neighborhoods under sampled colors.

N_{Q,φ}(X) = { y ∉ X : ∃ x ∈ X, xy ∈ E, f(xy) ∈ Q \\ φ(x), y ∉ φ(x) }

Vertex and color sets are numpy boolean masks so membership is O(1) and the
neighborhood is computed over all arcs leaving X in one vectorized pass.
All logarithms are base 2.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from rainbow.colored_graph import ColoredGraph
from shared.errors import BadProbabilityError, BadSetSizeError, VertexOutOfRangeError
from shared.models import ExpansionReport
from shared.rng import derive_seed, make_rng

logger = logging.getLogger(__name__)

VertexSet = Iterable[int] | np.ndarray
ColorSet = Iterable[int] | np.ndarray


def as_mask(items: Iterable[int] | np.ndarray, size: int, what: str = "vertex") -> np.ndarray:
    """Boolean mask of length ``size`` from a mask or an iterable of ids."""
    if isinstance(items, np.ndarray) and items.dtype == bool:
        if len(items) < size:
            out = np.zeros(size, dtype=bool)
            out[: len(items)] = items
            return out
        return items[:size]
    ids = np.fromiter(items, dtype=np.int64)
    if len(ids) and (ids.min() < 0 or ids.max() >= size):
        raise VertexOutOfRangeError(f"{what} id outside [0, {size})")
    out = np.zeros(size, dtype=bool)
    out[ids] = True
    return out


@dataclass(frozen=True, eq=False)
class ForbiddenSet:
    """A set of forbidden vertices plus a set of forbidden colors (φ)."""

    vertices: np.ndarray   # bool, length n
    colors: np.ndarray     # bool, length color_count

    @classmethod
    def empty(cls, n: int, color_count: int) -> "ForbiddenSet":
        return cls(np.zeros(n, dtype=bool), np.zeros(color_count, dtype=bool))

    @classmethod
    def of(
        cls,
        g: ColoredGraph,
        vertices: Iterable[int] = (),
        colors: Iterable[int] = (),
    ) -> "ForbiddenSet":
        return cls(as_mask(vertices, g.n, "vertex"), as_mask(colors, g.color_count, "color"))

    def has_vertex(self, v: int) -> bool:
        return bool(self.vertices[v])

    def has_color(self, c: int) -> bool:
        return bool(self.colors[c])

    def __len__(self) -> int:
        return int(self.vertices.sum() + self.colors.sum())

    def union(self, other: "ForbiddenSet") -> "ForbiddenSet":
        return ForbiddenSet(self.vertices | other.vertices, self.colors | other.colors)


@dataclass(frozen=True, eq=False)
class ForbiddenMap:
    """Per-vertex φ: a shared default plus sparse overrides."""

    default: ForbiddenSet
    overrides: dict[int, ForbiddenSet] = field(default_factory=dict)

    @classmethod
    def empty(cls, g: ColoredGraph) -> "ForbiddenMap":
        return cls(ForbiddenSet.empty(g.n, g.color_count))

    def lookup(self, v: int) -> ForbiddenSet:
        return self.overrides.get(v, self.default)


# ── Neighborhoods ─────────────────────────────────────────────────────────────

def restricted_neighborhood(
    g: ColoredGraph, X: VertexSet, Q: ColorSet, phi: ForbiddenMap
) -> np.ndarray:
    """Sorted vertex ids of N_{Q,φ}(X)."""
    in_x = as_mask(X, g.n, "vertex")
    q = as_mask(Q, g.color_count, "color")

    arcs = np.flatnonzero(in_x[g.arc_src])          # sorted by source
    src, dst, col = g.arc_src[arcs], g.indices[arcs], g.colors[arcs]
    keep = q[col] & ~in_x[dst]

    overridden = np.zeros(g.n, dtype=bool)
    if phi.overrides:
        overridden[list(phi.overrides)] = True
    plain = ~overridden[src]
    keep[plain] &= ~phi.default.colors[col[plain]] & ~phi.default.vertices[dst[plain]]

    for x, fs in phi.overrides.items():
        if not in_x[x]:
            continue
        lo, hi = np.searchsorted(src, [x, x + 1])
        keep[lo:hi] &= ~fs.colors[col[lo:hi]] & ~fs.vertices[dst[lo:hi]]

    return np.unique(dst[keep])


def sample_colors(color_count: int, p: float, seed: int) -> np.ndarray:
    """Bernoulli(p) color mask, independent per color."""
    if not 0.0 <= p <= 1.0:
        raise BadProbabilityError(f"Probability must be in [0, 1], got {p}")
    return make_rng(seed).random(color_count) < p


def expansion_bound(n: int, b: int) -> float:
    """min(|B|/4, |B|·log(2n/3|B|) / (8·log|B|)) for 2 <= |B|."""
    return min(b / 4, b * math.log2(2 * n / (3 * b)) / (8 * math.log2(b)))


def measure_expansion(
    g: ColoredGraph,
    B: VertexSet,
    phi: ForbiddenMap,
    p_c: float,
    trials: int,
    seed: int,
) -> ExpansionReport:
    """Empirical success fraction of the sampled-color expansion bound."""
    in_b = as_mask(B, g.n, "vertex")
    size = int(in_b.sum())
    if not 2 <= size <= g.n / 2:
        raise BadSetSizeError(f"Need 2 <= |B| <= n/2 = {g.n / 2}, got |B| = {size}")
    if not 0.0 <= p_c <= 1.0:
        raise BadProbabilityError(f"Probability must be in [0, 1], got {p_c}")

    bound = expansion_bound(g.n, size)
    observed = []
    for trial in range(trials):
        q = sample_colors(g.color_count, p_c, derive_seed(seed, trial))
        observed.append(len(restricted_neighborhood(g, in_b, q, phi)))

    hits = sum(1 for value in observed if value >= bound)
    report = ExpansionReport(
        trials=trials,
        set_size=size,
        p_c=p_c,
        bound=bound,
        observed=sorted(observed),
        success_fraction=hits / trials if trials else 0.0,
    )
    logger.info("expansion |B|=%d bound=%.3f success=%.3f", size, bound, report.success_fraction)
    return report
