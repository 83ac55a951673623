"""Tests for the sprinkled reach, the connector and the TK_t builder."""

import math
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow import rainbow_search
from rainbow.certificates import certificate_to_json
from rainbow.colored_graph import build
from rainbow.expansion import ForbiddenSet
from rainbow.generators import complete_graph, hypercube
from rainbow.rainbow_search import (
    build_tkt,
    check_hypotheses,
    connect,
    cycle_from_certificate,
    find_rainbow_cycle,
    q_schedule,
    reach,
)
from rainbow.structures import SubdivisionCertificate
from rainbow.verifier import verify_cycle, verify_path, verify_subdivision
from shared.errors import (
    BadProbabilityError,
    ForbiddenOriginError,
    NoConnectionError,
    NoCycleFoundError,
    PairFailedError,
    SearchTimeoutError,
    TooFewVerticesError,
)
from shared.models import SearchParams
from shared.rng import make_rng
from tests.conftest import path_graph, star


def empty_phi(g) -> ForbiddenSet:
    return ForbiddenSet.empty(g.n, g.color_count)


# ── q_schedule ──────────────────────────────────────────────────────────────────

class TestQSchedule:
    def test_full_probability(self):
        assert q_schedule(1.0, 5) == [0.5, 1.0, 1.0, 1.0, 1.0]

    def test_two_rounds(self):
        q = q_schedule(0.5, 2)
        assert q[0] == pytest.approx(0.25)
        assert q[1] == pytest.approx(1 / 3)

    def test_four_rounds(self):
        q = q_schedule(0.5, 4)
        assert q[0] == pytest.approx(0.25)
        assert q[1:] == pytest.approx([1 - (2 / 3) ** (1 / 3)] * 3)
        assert q[1] == pytest.approx(0.12648, abs=1e-5)

    def test_single_round(self):
        assert q_schedule(0.3, 1) == [0.3]

    @pytest.mark.parametrize("p_c", [0.0, -0.1, 1.5])
    def test_bad_probability(self, p_c):
        with pytest.raises(BadProbabilityError):
            q_schedule(p_c, 3)

    @given(
        st.floats(min_value=1e-6, max_value=1.0, exclude_min=False),
        st.integers(min_value=1, max_value=500),
    )
    @settings(max_examples=100)
    def test_union_of_rounds_is_one_sample(self, p_c, l):
        q = q_schedule(p_c, l)
        miss = math.prod(1 - x for x in q)
        assert abs((1 - miss) - p_c) <= 1e-12


# ── reach ───────────────────────────────────────────────────────────────────────

class TestReach:
    def test_star_center_reaches_all_leaves_in_one_round(self):
        g = star(5)
        result = reach(g, 0, empty_phi(g), SearchParams(rounds=1))
        assert sorted(result.parent) == [1, 2, 3, 4, 5]
        assert result.rounds_used == 1
        assert all(result.path_to(y).vertices == (0, y) for y in range(1, 6))

    def test_all_neighbors_forbidden(self):
        g = star(4)
        phi = ForbiddenSet.of(g, vertices=[1, 2, 3, 4])
        assert len(reach(g, 0, phi, SearchParams())) == 0

    def test_forbidden_origin(self):
        g = star(2)
        with pytest.raises(ForbiddenOriginError):
            reach(g, 0, ForbiddenSet.of(g, vertices=[0]), SearchParams())

    def test_forbidden_colors_are_never_used(self):
        g = complete_graph(16)
        phi = ForbiddenSet.of(g, colors=[0, 1, 2])
        result = reach(g, 5, phi, SearchParams(seed=3))
        for y in result.parent:
            assert not {0, 1, 2} & set(result.path_to(y).colors)

    @pytest.mark.parametrize("seed", range(5))
    def test_hypercube_paths_are_geodesics(self, seed):
        g = hypercube(6)
        result = reach(g, 0, empty_phi(g), SearchParams(seed=seed))
        assert len(result) > 0
        for y, path in result.paths.items():
            assert verify_path(g, path).ok
            assert path.length == bin(y).count("1")

    def test_palette_restricts_colors(self):
        g = complete_graph(16)
        palette = make_rng(1).random(g.color_count) < 0.5
        result = reach(g, 0, empty_phi(g), SearchParams(), palette=palette)
        allowed = set(palette.nonzero()[0].tolist())
        for path in result.paths.values():
            assert set(path.colors) <= allowed

    def test_deterministic(self):
        g = complete_graph(32)
        a = reach(g, 0, empty_phi(g), SearchParams(p_c=0.5, seed=11))
        b = reach(g, 0, empty_phi(g), SearchParams(p_c=0.5, seed=11))
        assert a.parent == b.parent
        assert a.rounds_used == b.rounds_used


# ── connect ─────────────────────────────────────────────────────────────────────

class TestConnect:
    def test_adjacent_endpoints(self):
        g = path_graph(2)
        path = connect(g, 0, 1, empty_phi(g), SearchParams())
        assert path.vertices == (0, 1)
        assert path.colors == (0,)

    def test_disconnected_graph(self):
        g = build(4, [(0, 1, 0), (2, 3, 1)])
        with pytest.raises(NoConnectionError) as exc:
            connect(g, 0, 3, empty_phi(g), SearchParams(retries=2))
        assert len(exc.value.reach_sizes) == 3

    def test_same_vertex(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            connect(g, 1, 1, empty_phi(g), SearchParams())

    def test_forbidden_endpoint(self):
        g = path_graph(3)
        with pytest.raises(ForbiddenOriginError):
            connect(g, 0, 2, ForbiddenSet.of(g, vertices=[2]), SearchParams())

    def test_k16_random_pairs(self, k16):
        rng = make_rng(2024)
        params = SearchParams(rounds=8)
        for k in range(20):
            u, v = (int(x) for x in rng.choice(16, size=2, replace=False))
            path = connect(k16, u, v, empty_phi(k16), params.with_seed(k))
            assert (path.start, path.end) == (u, v)
            assert verify_path(k16, path).ok
            assert len(path.vertices) <= 2 * params.rounds + 1

    def test_avoids_forbidden_set(self, k16):
        phi = ForbiddenSet.of(k16, vertices=[3, 4, 5], colors=[0, 7])
        path = connect(k16, 0, 1, phi, SearchParams(seed=5))
        assert verify_path(k16, path, phi).ok


# ── build_tkt ───────────────────────────────────────────────────────────────────

class TestBuildTkt:
    def test_t2_on_path_is_a_single_path(self):
        g = path_graph(4)
        cert = build_tkt(g, 2, SearchParams(extract=False))
        assert cert.branch == (1, 2)
        assert cert.paths[(0, 1)].vertices == (1, 2)

    def test_t3_on_triangle(self, triangle):
        cert = build_tkt(triangle, 3, SearchParams())
        assert sorted(cert.branch) == [0, 1, 2]
        assert verify_subdivision(triangle, cert).ok
        assert verify_cycle(triangle, cycle_from_certificate(cert)).ok

    def test_too_few_vertices(self):
        with pytest.raises(TooFewVerticesError):
            build_tkt(path_graph(3), 4, SearchParams())

    def test_pair_failure_carries_partial(self):
        g = star(3)
        with pytest.raises(PairFailedError) as exc:
            build_tkt(g, 3, SearchParams(extract=False, retries=1, pair_retries=1))
        assert exc.value.pair == (1, 2)
        assert isinstance(exc.value.partial, SubdivisionCertificate)
        assert (1, 2) not in exc.value.partial.paths

    @pytest.mark.parametrize("seed", range(5))
    def test_k64_t4_certificates_verify(self, k64, seed):
        try:
            cert = build_tkt(k64, 4, SearchParams(p_c=0.5, seed=seed))
        except PairFailedError:
            return
        assert cert.t == 4
        assert len(cert.paths) == 6
        assert verify_subdivision(k64, cert).ok

    def test_k16_t4_succeeds_for_some_seed(self, k16):
        certs = []
        for seed in range(5):
            try:
                certs.append(build_tkt(k16, 4, SearchParams(seed=seed)))
            except PairFailedError:
                continue
        assert certs
        for cert in certs:
            assert verify_subdivision(k16, cert).ok
            assert cert.stats.connect_calls >= 6

    def test_deterministic_certificate_bytes(self, k64):
        def outcome(params):
            try:
                return certificate_to_json(build_tkt(k64, 4, params))
            except PairFailedError as exc:
                return exc.pair

        params = SearchParams(seed=7)
        assert outcome(params) == outcome(params)

    def test_timeout(self, k64):
        with pytest.raises(SearchTimeoutError):
            build_tkt(k64, 4, SearchParams(time_limit=1e-9))

    def test_timeout_covers_extraction(self, k16, monkeypatch):
        real = rainbow_search.extract_maximal

        def slow_extract(g):
            time.sleep(0.2)
            return real(g)

        def no_search(*args, **kwargs):
            raise AssertionError("search started after the deadline")

        monkeypatch.setattr(rainbow_search, "extract_maximal", slow_extract)
        monkeypatch.setattr(rainbow_search, "_connect", no_search)
        with pytest.raises(SearchTimeoutError):
            build_tkt(k16, 3, SearchParams(time_limit=0.05))

    def test_hypotheses_unmet_at_desk_scale(self, k64):
        unmet = check_hypotheses(k64, SearchParams())
        assert any("lambda" in item for item in unmet)


# ── find_rainbow_cycle ──────────────────────────────────────────────────────────

class TestFindRainbowCycle:
    def test_triangle(self, triangle):
        cycle = find_rainbow_cycle(triangle, SearchParams())
        assert sorted(cycle.vertices[:-1]) == [0, 1, 2]
        assert cycle.vertices[0] == cycle.vertices[-1]
        assert verify_cycle(triangle, cycle).ok

    def test_tree_never_has_one(self):
        tree = build(7, [(0, 1, 0), (0, 2, 1), (1, 3, 1), (1, 4, 2), (2, 5, 0), (2, 6, 2)])
        for seed in range(5):
            with pytest.raises(NoCycleFoundError):
                find_rainbow_cycle(tree, SearchParams(seed=seed))

    @pytest.mark.parametrize("seed", range(10))
    def test_hypercube_negative_control(self, seed):
        with pytest.raises(NoCycleFoundError):
            find_rainbow_cycle(hypercube(4), SearchParams(seed=seed))

    def test_too_few_vertices(self):
        with pytest.raises(TooFewVerticesError):
            find_rainbow_cycle(path_graph(2), SearchParams())

    def test_k16_finds_a_cycle(self, k16):
        cycle = find_rainbow_cycle(k16, SearchParams(seed=4))
        assert verify_cycle(k16, cycle).ok
