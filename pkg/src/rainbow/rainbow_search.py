"""
Sprinkled rainbow BFS, the two-sided connector, and the greedy TK_t builder.

reach
    Colors are exposed in ``l`` rounds; round i samples Q_i with probability q_i
    so that the union of all rounds is one Bernoulli(p_c) sample per color.
    Round i+1 may only extend vertices reached before it. Every reached vertex
    keeps a single parent pointer; the per-vertex forbidden set φ_i(x) (φ0 plus
    the vertices and colors of the stored path to x) is derived by walking those
    pointers, never copied.

connect
    Colors are split into R_u / R_v by a fair coin, both endpoints grow a reach
    set inside their own palette, and the two stored paths are spliced at the
    meeting vertex minimizing the total vertex count. The halves are color
    disjoint because the palettes are.

build_tkt
    Connects the t branch vertices pair by pair, forbidding every vertex and
    color already used (and all other branch vertices) for the next pair.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from rainbow.colored_graph import ColoredGraph, induced_subgraph
from rainbow.expansion import ForbiddenSet
from rainbow.omega_maximal import extract_maximal
from rainbow.structures import RainbowCycle, RainbowPath, SearchStats, SubdivisionCertificate
from rainbow.verifier import verify_path, verify_subdivision
from shared.config import DEBUG
from shared.errors import (
    BadProbabilityError,
    ForbiddenOriginError,
    NoConnectionError,
    NoCycleFoundError,
    PairFailedError,
    SearchFailure,
    SearchTimeoutError,
    TooFewVerticesError,
)
from shared.models import SearchParams
from shared.rng import derive_seed, make_rng

logger = logging.getLogger(__name__)

__all__ = [
    "RainbowCycle",
    "RainbowPath",
    "ReachSet",
    "SearchStats",
    "SubdivisionCertificate",
    "build_tkt",
    "check_hypotheses",
    "connect",
    "cycle_from_certificate",
    "find_rainbow_cycle",
    "q_schedule",
    "reach",
]

# Salt for the pair-order stream of build_tkt.
_PAIR_ORDER_KEY = 0x7A17


# ── Sprinkling schedule ───────────────────────────────────────────────────────

def q_schedule(p_c: float, l: int) -> list[float]:
    """q_1 = p_c/2 and q_i = q for i >= 2, with (1 − q_1)(1 − q)^(l−1) = 1 − p_c."""
    if not 0.0 < p_c <= 1.0:
        raise BadProbabilityError(f"p_c must be in (0, 1], got {p_c}")
    if l < 1:
        raise ValueError(f"Round count must be >= 1, got {l}")
    if l == 1:
        return [p_c]
    if p_c == 1.0:
        q = 1.0
    else:
        q = -math.expm1(math.log((1.0 - p_c) / (1.0 - p_c / 2.0)) / (l - 1))
    return [p_c / 2.0] + [q] * (l - 1)


# ── Reach sets ────────────────────────────────────────────────────────────────

@dataclass
class ReachSet:
    """Vertices reachable from ``origin`` by stored rainbow paths.

    ``parent[y] = (x, color)`` for every reached y; the origin itself is not a
    key but is always reachable by the trivial path.
    """

    origin: int
    parent: dict[int, tuple[int, int]] = field(default_factory=dict)
    depth: dict[int, int] = field(default_factory=dict)
    rounds_used: int = 0
    colors_sampled: list[np.ndarray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.parent)

    def __contains__(self, v: int) -> bool:
        return v == self.origin or v in self.parent

    def path_to(self, x: int) -> RainbowPath:
        vertices, colors = [x], []
        while x != self.origin:
            x, c = self.parent[x]
            vertices.append(x)
            colors.append(c)
        return RainbowPath(tuple(reversed(vertices)), tuple(reversed(colors)))

    @property
    def paths(self) -> dict[int, RainbowPath]:
        return {y: self.path_to(y) for y in self.parent}

    def depth_array(self, n: int) -> np.ndarray:
        """Path length per vertex, −1 where unreached (origin has 0)."""
        out = np.full(n, -1, dtype=np.int64)
        out[self.origin] = 0
        if self.depth:
            keys = np.fromiter(self.depth.keys(), dtype=np.int64, count=len(self.depth))
            out[keys] = np.fromiter(self.depth.values(), dtype=np.int64, count=len(self.depth))
        return out


def _gather(ptr: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """Concatenated index ranges ptr[k]:ptr[k+1] for every k in keys."""
    starts = ptr[keys]
    lengths = ptr[keys + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.repeat(starts - (np.cumsum(lengths) - lengths), lengths)
    return offsets + np.arange(total, dtype=np.int64)


def _check_deadline(deadline: float | None) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise SearchTimeoutError("Search exceeded its time limit")


def reach(
    g: ColoredGraph,
    v: int,
    phi0: ForbiddenSet,
    params: SearchParams,
    palette: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
    deadline: float | None = None,
) -> ReachSet:
    """Multi-round sprinkled rainbow BFS from ``v`` avoiding φ0.

    ``palette`` (a color mask) restricts every round's sample; the origin acts as
    a parent in every round through its trivial path.
    """
    if phi0.has_vertex(v):
        raise ForbiddenOriginError(f"Origin {v} is a forbidden vertex")

    rng = rng if rng is not None else make_rng(params.seed)
    rounds = params.resolve_rounds(g.n)
    schedule = q_schedule(params.p_c, rounds)

    allowed = ~phi0.colors[: g.color_count]
    if palette is not None:
        allowed = allowed & palette
    ptr, class_u, class_v = g.color_classes

    result = ReachSet(origin=v)
    in_b = np.zeros(g.n, dtype=bool)
    in_b[v] = True
    blocked = phi0.vertices[: g.n].copy()
    blocked[v] = True
    parent_of = result.parent
    depth = result.depth
    depth_of = {v: 0}

    def path_has_color(x: int, c: int) -> bool:
        while x != v:
            x, used = parent_of[x]
            if used == c:
                return True
        return False

    for round_no, q in enumerate(schedule, start=1):
        _check_deadline(deadline)
        sampled = np.flatnonzero((rng.random(g.color_count) < q) & allowed)
        result.colors_sampled.append(sampled)

        edge_ids = _gather(ptr, sampled)
        a, b = class_u[edge_ids], class_v[edge_ids]
        forward = in_b[a] & ~blocked[b]
        backward = in_b[b] & ~blocked[a]
        xs = np.concatenate([a[forward], b[backward]])
        ys = np.concatenate([b[forward], a[backward]])
        cs = g.class_colors[np.concatenate([edge_ids[forward], edge_ids[backward]])]

        order = rng.permutation(len(xs))
        added: dict[int, tuple[int, int]] = {}
        for x, y, c in zip(xs[order].tolist(), ys[order].tolist(), cs[order].tolist()):
            if y in added or path_has_color(x, c):
                continue
            added[y] = (x, c)

        for y, (x, c) in added.items():
            parent_of[y] = (x, c)
            depth_of[y] = depth_of[x] + 1
            depth[y] = depth_of[y]
            in_b[y] = True
            blocked[y] = True
        if added:
            result.rounds_used = round_no
        elif round_no > 1 and all(rest == 1.0 for rest in schedule[round_no:]):
            # Every later round sees the same colors and the same parents.
            break

    if DEBUG:
        for y in parent_of:
            verdict = verify_path(g, result.path_to(y), phi0, allowed)
            assert verdict.ok, f"reach emitted an invalid path to {y}: {verdict.violations}"
    return result


# ── Connector ─────────────────────────────────────────────────────────────────

def _splice(g: ColoredGraph, from_u: ReachSet, from_v: ReachSet) -> RainbowPath | None:
    du, dv = from_u.depth_array(g.n), from_v.depth_array(g.n)
    meet = (du >= 0) & (dv >= 0)
    if not meet.any():
        return None
    totals = np.where(meet, du + dv, np.iinfo(np.int64).max)
    w = int(np.argmin(totals))

    pu, pv = from_u.path_to(w), from_v.path_to(w)
    on_v = {x: k for k, x in enumerate(pv.vertices)}
    # Cut at the first vertex of P_uw that also lies on P_vw, so the union stays simple.
    for i, x in enumerate(pu.vertices):
        if x in on_v:
            j = on_v[x]
            break
    vertices = pu.vertices[: i + 1] + pv.vertices[:j][::-1]
    head, tail = pu.colors[:i], pv.colors[:j][::-1]
    assert not set(head) & set(tail), "connect halves share a color"
    return RainbowPath(vertices, head + tail)


def _connect(
    g: ColoredGraph,
    u: int,
    v: int,
    phi0: ForbiddenSet,
    params: SearchParams,
    deadline: float | None = None,
) -> tuple[RainbowPath, SearchStats]:
    if u == v:
        raise ValueError("connect needs two distinct vertices")
    for endpoint in (u, v):
        if phi0.has_vertex(endpoint):
            raise ForbiddenOriginError(f"Endpoint {endpoint} is a forbidden vertex")

    reach_sizes: list[tuple[int, int]] = []
    for attempt in range(params.retries + 1):
        rng = make_rng(derive_seed(params.seed, attempt))
        side_u = rng.random(g.color_count) < 0.5
        from_u = reach(g, u, phi0, params, palette=side_u, rng=rng, deadline=deadline)
        from_v = reach(g, v, phi0, params, palette=~side_u, rng=rng, deadline=deadline)
        reach_sizes.append((len(from_u), len(from_v)))

        path = _splice(g, from_u, from_v)
        if path is not None:
            verdict = verify_path(g, path, phi0)
            assert verdict.ok, f"connect produced an invalid path: {verdict.violations}"
            stats = SearchStats(
                rounds_used=max(from_u.rounds_used, from_v.rounds_used),
                connect_calls=1,
                attempts=attempt + 1,
            )
            return path, stats
        logger.debug("connect %d-%d attempt %d: reach sizes %s", u, v, attempt, reach_sizes[-1])

    raise NoConnectionError(
        f"No rainbow path from {u} to {v} after {params.retries + 1} color partitions",
        reach_sizes=reach_sizes,
    )


def connect(
    g: ColoredGraph,
    u: int,
    v: int,
    phi0: ForbiddenSet,
    params: SearchParams,
    deadline: float | None = None,
) -> RainbowPath:
    """A rainbow (R \\ φ0)-path from u to v avoiding φ0's vertices, or NoConnectionError."""
    path, _ = _connect(g, u, v, phi0, params, deadline)
    return path


# ── Growth hypotheses ─────────────────────────────────────────────────────────

def check_hypotheses(g: ColoredGraph, params: SearchParams, phi0_size: int = 0) -> list[str]:
    """Quantitative hypotheses of the reachability argument that ``g`` violates."""
    if g.n < 4 or g.m == 0:
        return ["graph too small for the asymptotic hypotheses"]
    log_n = math.log2(g.n)
    loglog_n = math.log2(log_n)
    d = 2 * g.m / g.n
    lam = params.resolve_lambda(g.n)
    unmet = []
    if lam < loglog_n ** 10:
        unmet.append(f"lambda {lam:.3g} < (log log n)^10 = {loglog_n ** 10:.3g}")
    if params.p_c < 1 / log_n:
        unmet.append(f"p_c {params.p_c:.3g} < 1/log n = {1 / log_n:.3g}")
    need = lam ** 2 * log_n ** 2 / params.p_c
    if d < need:
        unmet.append(f"d {d:.3g} < lambda^2 p_c^-1 (log n)^2 = {need:.3g}")
    if phi0_size > d / (16 * log_n):
        unmet.append(f"|phi0| {phi0_size} > d/(16 log n) = {d / (16 * log_n):.3g}")
    return unmet


# ── TK_t builder ──────────────────────────────────────────────────────────────

def _branch_vertices(h: ColoredGraph, t: int) -> list[int]:
    """Highest degree first, ties by smaller index."""
    order = np.lexsort((np.arange(h.n), -h.degrees))
    return order[:t].tolist()


def _relabel(cert_paths: dict, branch: list[int], to_parent: list[int], stats: SearchStats) -> SubdivisionCertificate:
    def lift(p: RainbowPath) -> RainbowPath:
        return RainbowPath(tuple(to_parent[x] for x in p.vertices), p.colors)

    return SubdivisionCertificate(
        branch=tuple(to_parent[b] for b in branch),
        paths={pair: lift(p) for pair, p in sorted(cert_paths.items())},
        stats=stats,
    )


def build_tkt(g: ColoredGraph, t: int, params: SearchParams) -> SubdivisionCertificate:
    """Greedy rainbow TK_t inside a log-maximal subgraph of ``g``."""
    if t < 2:
        raise ValueError(f"t must be >= 2, got {t}")
    if g.n < t:
        raise TooFewVerticesError(f"Need at least t={t} vertices, got {g.n}")
    deadline = time.monotonic() + params.time_limit if params.time_limit else None

    host, to_parent = g, list(range(g.n))
    if params.extract and g.m > 0 and g.n >= 2:
        maximal = extract_maximal(g)
        if len(maximal.vertices) >= t:
            host, _ = induced_subgraph(g, maximal.vertices)
            to_parent = list(maximal.vertices)
        else:
            logger.warning(
                "log-maximal subgraph has %d < t=%d vertices; searching the whole graph",
                len(maximal.vertices),
                t,
            )
    _check_deadline(deadline)

    for problem in check_hypotheses(host, params):
        logger.warning("hypothesis not met: %s", problem)

    branch = _branch_vertices(host, t)
    pairs = list(combinations(range(t), 2))
    order = make_rng(derive_seed(params.seed, _PAIR_ORDER_KEY, t)).permutation(len(pairs))

    used_vertices = np.zeros(host.n, dtype=bool)
    used_colors = np.zeros(host.color_count, dtype=bool)
    accepted: dict[tuple[int, int], RainbowPath] = {}
    rounds_used = connect_calls = attempts = 0
    log_n = math.log2(max(host.n, 2))
    budget = (2 * host.m / host.n) / (16 * log_n)

    for k, pair_index in enumerate(order.tolist()):
        i, j = pairs[pair_index]
        forbid = used_vertices.copy()
        forbid[branch] = True
        forbid[branch[i]] = forbid[branch[j]] = False
        phi0 = ForbiddenSet(forbid, used_colors.copy())
        if len(phi0) > budget:
            logger.warning("|phi0| = %d exceeds d/(16 log n) = %.2f for pair %s", len(phi0), budget, (i, j))

        for retry in range(params.pair_retries + 1):
            seed = derive_seed(params.seed, k, retry)
            try:
                path, stats = _connect(host, branch[i], branch[j], phi0, params.with_seed(seed), deadline)
            except NoConnectionError as exc:
                connect_calls += 1
                attempts += len(exc.reach_sizes)
                logger.info("pair %s retry %d failed: %s", (i, j), retry, exc.detail)
                continue
            connect_calls += 1
            attempts += stats.attempts
            rounds_used = max(rounds_used, stats.rounds_used)
            break
        else:
            partial = _relabel(
                accepted, branch, to_parent, SearchStats(rounds_used, connect_calls, attempts)
            )
            raise PairFailedError(
                f"Could not connect branch pair {(i, j)} after {params.pair_retries + 1} tries",
                pair=(i, j),
                partial=partial,
            )

        accepted[(i, j)] = path
        used_vertices[list(path.vertices)] = True
        used_colors[list(path.colors)] = True

    cert = _relabel(accepted, branch, to_parent, SearchStats(rounds_used, connect_calls, attempts))
    if DEBUG:
        verdict = verify_subdivision(g, cert)
        assert verdict.ok, f"build_tkt produced an invalid certificate: {verdict.violations}"
    return cert


# ── Rainbow cycles ────────────────────────────────────────────────────────────

def cycle_from_certificate(cert: SubdivisionCertificate) -> RainbowCycle:
    """Close the three paths of a TK_3 into a cycle b0 → b1 → b2 → b0."""
    if cert.t != 3:
        raise ValueError(f"Need a TK_3 certificate, got t={cert.t}")
    legs = [cert.paths[(0, 1)], cert.paths[(1, 2)], cert.paths[(0, 2)].reversed()]
    vertices = list(legs[0].vertices)
    colors = list(legs[0].colors)
    for leg in legs[1:]:
        vertices.extend(leg.vertices[1:])
        colors.extend(leg.colors)
    return RainbowCycle(tuple(vertices), tuple(colors))


def find_rainbow_cycle(g: ColoredGraph, params: SearchParams) -> RainbowCycle:
    """A rainbow cycle via TK_3. Failure is never a proof that none exists."""
    if g.n < 3:
        raise TooFewVerticesError(f"A cycle needs at least 3 vertices, got {g.n}")
    try:
        cert = build_tkt(g, 3, params)
    except (SearchFailure, TooFewVerticesError) as exc:
        if isinstance(exc, SearchTimeoutError):
            raise
        raise NoCycleFoundError(f"No rainbow cycle found: {exc.detail}") from exc
    return cycle_from_certificate(cert)
