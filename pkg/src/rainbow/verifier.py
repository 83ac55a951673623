"""
Independent certificate checks and exhaustive oracles for tiny graphs.

Nothing here trusts the search: every hop is re-read from the host graph.
Certificate defects are reported as Verdict violations, never raised.
"""

import logging
from collections import Counter
from itertools import combinations

import numpy as np

from rainbow.colored_graph import ColoredGraph
from rainbow.expansion import ForbiddenSet, as_mask
from rainbow.structures import RainbowCycle, RainbowPath, SubdivisionCertificate
from shared.config import ORACLE_MAX_EDGES, ORACLE_MAX_VERTICES
from shared.errors import BudgetExceededError, SearchFailure, TooFewVerticesError
from shared.models import CrossCheckReport, SearchParams, Verdict, Violation, ViolationCode
from shared.rng import derive_seed

logger = logging.getLogger(__name__)


def _violation(code: ViolationCode, detail: str) -> Violation:
    return Violation(code=code, detail=detail)


def _check_hops(
    g: ColoredGraph, vertices: tuple[int, ...], colors: tuple[int, ...]
) -> list[Violation]:
    out: list[Violation] = []
    for k in range(len(vertices) - 1):
        a, b = vertices[k], vertices[k + 1]
        actual = g.color_of(a, b)
        if actual is None:
            out.append(_violation(ViolationCode.NOT_ADJACENT, f"hop {k}: {a}-{b} is not an edge"))
        elif colors[k] != actual:
            out.append(
                _violation(
                    ViolationCode.COLOR_MISMATCH,
                    f"hop {k}: {a}-{b} has color {actual}, certificate says {colors[k]}",
                )
            )
    return out


def _repeats(items: tuple[int, ...]) -> list[int]:
    return sorted(x for x, count in Counter(items).items() if count > 1)


def _shape_violations(
    g: ColoredGraph, vertices: tuple[int, ...], colors: tuple[int, ...]
) -> list[Violation]:
    if not vertices:
        return [_violation(ViolationCode.NOT_A_PATH, "no vertices")]
    if len(colors) != len(vertices) - 1:
        return [
            _violation(
                ViolationCode.NOT_A_PATH,
                f"{len(vertices)} vertices need {len(vertices) - 1} colors, got {len(colors)}",
            )
        ]
    bad = [v for v in vertices if not 0 <= v < g.n]
    if bad:
        return [_violation(ViolationCode.NOT_A_PATH, f"vertices {bad} are outside the graph")]
    return []


# ── Paths and cycles ──────────────────────────────────────────────────────────

def verify_path(
    g: ColoredGraph,
    path: RainbowPath,
    forbidden: ForbiddenSet | None = None,
    allowed: np.ndarray | list[int] | None = None,
) -> Verdict:
    """Adjacency and stored color per hop, distinct vertices and colors, φ0 avoidance."""
    shape = _shape_violations(g, path.vertices, path.colors)
    if shape:
        return Verdict(violations=shape)

    violations = _check_hops(g, path.vertices, path.colors)
    for v in _repeats(path.vertices):
        violations.append(_violation(ViolationCode.REPEAT_VERTEX, f"vertex {v} repeats"))
    for c in _repeats(path.colors):
        violations.append(_violation(ViolationCode.REPEAT_COLOR, f"color {c} repeats"))

    if forbidden is not None:
        for v in path.interior:
            if forbidden.has_vertex(v):
                violations.append(
                    _violation(ViolationCode.FORBIDDEN_VERTEX, f"interior vertex {v} is forbidden")
                )
        for c in path.colors:
            if 0 <= c < len(forbidden.colors) and forbidden.has_color(c):
                violations.append(_violation(ViolationCode.FORBIDDEN_COLOR, f"color {c} is forbidden"))

    if allowed is not None:
        mask = as_mask(allowed, g.color_count, "color")
        for c in path.colors:
            if not 0 <= c < len(mask) or not mask[c]:
                violations.append(
                    _violation(ViolationCode.FORBIDDEN_COLOR, f"color {c} is outside the allowed set")
                )
    return Verdict(violations=violations)


def verify_cycle(g: ColoredGraph, cycle: RainbowCycle) -> Verdict:
    shape = _shape_violations(g, cycle.vertices, cycle.colors)
    if shape:
        return Verdict(violations=shape)
    if cycle.vertices[0] != cycle.vertices[-1]:
        return Verdict(violations=[_violation(ViolationCode.NOT_A_PATH, "walk is not closed")])
    if cycle.length < 3:
        return Verdict(
            violations=[_violation(ViolationCode.NOT_A_PATH, f"cycle of length {cycle.length} < 3")]
        )

    violations = _check_hops(g, cycle.vertices, cycle.colors)
    for v in _repeats(cycle.vertices[:-1]):
        violations.append(_violation(ViolationCode.REPEAT_VERTEX, f"vertex {v} repeats"))
    for c in _repeats(cycle.colors):
        violations.append(_violation(ViolationCode.REPEAT_COLOR, f"color {c} repeats"))
    return Verdict(violations=violations)


# ── Subdivisions ──────────────────────────────────────────────────────────────

def verify_subdivision(g: ColoredGraph, cert: SubdivisionCertificate) -> Verdict:
    """Every pair has a rainbow path between its branch vertices; interiors are
    pairwise disjoint and branch-free; no color is used by two paths."""
    violations: list[Violation] = []
    branch = cert.branch
    t = len(branch)

    if t < 2:
        violations.append(_violation(ViolationCode.NOT_A_PATH, f"{t} branch vertices, need >= 2"))
    for v in _repeats(branch):
        violations.append(_violation(ViolationCode.REPEAT_VERTEX, f"branch vertex {v} repeats"))
    outside = [v for v in branch if not 0 <= v < g.n]
    if outside:
        violations.append(_violation(ViolationCode.NOT_A_PATH, f"branch vertices {outside} outside graph"))
        return Verdict(violations=violations)

    expected = set(combinations(range(t), 2))
    for pair in sorted(set(cert.paths) - expected):
        violations.append(_violation(ViolationCode.NOT_A_PATH, f"unexpected pair {pair}"))
    for pair in sorted(expected - set(cert.paths)):
        violations.append(_violation(ViolationCode.NOT_A_PATH, f"missing path for pair {pair}"))

    branch_set = set(branch)
    interior_owner: dict[int, tuple[int, int]] = {}
    color_owner: dict[int, tuple[int, int]] = {}

    for pair in sorted(set(cert.paths) & expected):
        path = cert.paths[pair]
        i, j = pair
        for v in path_violations(g, path, pair):
            violations.append(v)
        if not path.vertices:
            continue

        ends = (path.start, path.end)
        if ends not in {(branch[i], branch[j]), (branch[j], branch[i])}:
            violations.append(
                _violation(
                    ViolationCode.ENDPOINT_MISMATCH,
                    f"pair {pair}: path runs {ends}, expected {branch[i]}-{branch[j]}",
                )
            )

        for v in set(path.interior):
            if v in branch_set:
                violations.append(
                    _violation(ViolationCode.BRANCH_INSIDE_PATH, f"pair {pair}: branch vertex {v} inside")
                )
            elif v in interior_owner:
                violations.append(
                    _violation(
                        ViolationCode.PATHS_INTERSECT,
                        f"vertex {v} is interior to pairs {interior_owner[v]} and {pair}",
                    )
                )
            else:
                interior_owner[v] = pair

        for c in set(path.colors):
            if c in color_owner:
                violations.append(
                    _violation(
                        ViolationCode.GLOBAL_COLOR_REUSE,
                        f"color {c} is used by pairs {color_owner[c]} and {pair}",
                    )
                )
            else:
                color_owner[c] = pair

    return Verdict(violations=violations)


def path_violations(g: ColoredGraph, path: RainbowPath, pair: tuple[int, int]) -> list[Violation]:
    """verify_path violations, prefixed with the pair they belong to."""
    return [
        Violation(code=v.code, detail=f"pair {pair}: {v.detail}")
        for v in verify_path(g, path).violations
    ]


# ── Exhaustive rainbow-cycle oracle ───────────────────────────────────────────

def _within_budget(g: ColoredGraph, max_edges: int, max_vertices: int) -> bool:
    return g.m <= max_edges or g.n <= max_vertices


def rainbow_cycle_oracle(
    g: ColoredGraph,
    max_edges: int = ORACLE_MAX_EDGES,
    max_vertices: int = ORACLE_MAX_VERTICES,
) -> RainbowCycle | None:
    """A rainbow cycle witness, or None when exhaustive search proves there is none.

    DFS over simple paths whose smallest vertex is the start, carrying the used
    colors as a bitmask; a branch dies as soon as it would repeat a color.
    """
    if not _within_budget(g, max_edges, max_vertices):
        raise BudgetExceededError(
            f"Oracle budget is e <= {max_edges} or v <= {max_vertices}; got e={g.m}, v={g.n}",
            m=g.m,
            n=g.n,
        )

    adjacency = [
        list(zip(g.neighbors(v).tolist(), g.incident_colors(v).tolist())) for v in range(g.n)
    ]

    def extend(start: int, path: list[int], colors: list[int], used: int, on_path: set[int]):
        x = path[-1]
        for y, c in adjacency[x]:
            if used >> c & 1:
                continue
            if y == start and len(path) >= 3:
                return RainbowCycle(tuple(path + [start]), tuple(colors + [c]))
            if y <= start or y in on_path:
                continue
            path.append(y)
            colors.append(c)
            on_path.add(y)
            found = extend(start, path, colors, used | (1 << c), on_path)
            if found is not None:
                return found
            path.pop()
            colors.pop()
            on_path.discard(y)
        return None

    for s in range(g.n):
        found = extend(s, [s], [], 0, {s})
        if found is not None:
            return found
    return None


def cross_check(g: ColoredGraph, params: SearchParams, trials: int) -> CrossCheckReport:
    """Run the randomized cycle search ``trials`` times against the exhaustive oracle."""
    from rainbow.rainbow_search import find_rainbow_cycle  # noqa: PLC0415

    witness = rainbow_cycle_oracle(g)
    successes = 0
    sound = True
    for trial in range(trials):
        try:
            cycle = find_rainbow_cycle(g, params.with_seed(derive_seed(params.seed, trial)))
        except (SearchFailure, TooFewVerticesError):
            continue
        successes += 1
        if not verify_cycle(g, cycle).ok:
            sound = False

    consistent = sound and not (successes and witness is None)
    if not consistent:
        logger.error("cross_check: search reported a cycle the oracle rules out")
    return CrossCheckReport(
        trials=trials,
        oracle_found=witness is not None,
        oracle_cycle=list(witness.vertices) if witness else None,
        search_successes=successes,
        consistent=consistent,
        incomplete=witness is not None and successes == 0,
    )
