"""Tests for restricted neighborhoods, color sampling and expansion measurement."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow.colored_graph import ColoredGraph, build
from rainbow.expansion import (
    ForbiddenMap,
    ForbiddenSet,
    expansion_bound,
    measure_expansion,
    restricted_neighborhood,
    sample_colors,
)
from rainbow.generators import hypercube, random_colored
from shared.errors import BadProbabilityError, BadSetSizeError, VertexOutOfRangeError
from tests.conftest import colored_graphs, path_graph


def neighborhood_by_enumeration(g: ColoredGraph, X: set, Q: set, phi: ForbiddenMap) -> list[int]:
    """Triple loop straight from the definition."""
    out = set()
    for x in X:
        fs = phi.lookup(x)
        for y in range(g.n):
            c = g.color_of(x, y)
            if y in X or c is None:
                continue
            if c in Q and not fs.has_color(c) and not fs.has_vertex(y):
                out.add(y)
    return sorted(out)


@st.composite
def neighborhood_instances(draw):
    g = draw(colored_graphs(max_n=10))
    subset = st.lists(st.integers(0, g.n - 1), unique=True)
    colors = st.lists(st.integers(0, max(g.color_count - 1, 0)), unique=True) if g.color_count else st.just([])
    X = set(draw(subset))
    Q = set(draw(colors))

    def forbidden():
        return ForbiddenSet.of(g, draw(subset), draw(colors))

    overrides = {v: forbidden() for v in draw(subset)}
    return g, X, Q, ForbiddenMap(forbidden(), overrides)


# ── restricted_neighborhood ─────────────────────────────────────────────────────

class TestRestrictedNeighborhood:
    def test_whole_vertex_set_is_empty(self):
        g = hypercube(3)
        out = restricted_neighborhood(g, range(g.n), range(3), ForbiddenMap.empty(g))
        assert out.tolist() == []

    def test_no_colors_is_empty(self):
        g = hypercube(3)
        assert restricted_neighborhood(g, [0], [], ForbiddenMap.empty(g)).tolist() == []

    def test_path_example(self):
        g = path_graph(3)  # a=0, b=1, c=2; ab color 0, bc color 1
        assert restricted_neighborhood(g, [1], [0], ForbiddenMap.empty(g)).tolist() == [0]

    def test_override_applies_only_to_its_vertex(self):
        g = path_graph(3)
        phi = ForbiddenMap(ForbiddenSet.empty(g.n, g.color_count), {0: ForbiddenSet.of(g, [1])})
        assert restricted_neighborhood(g, [0, 2], [0, 1], phi).tolist() == [1]
        assert restricted_neighborhood(g, [0], [0, 1], phi).tolist() == []

    def test_out_of_range(self):
        g = path_graph(3)
        with pytest.raises(VertexOutOfRangeError):
            restricted_neighborhood(g, [5], [0], ForbiddenMap.empty(g))

    @given(neighborhood_instances())
    @settings(max_examples=1000, deadline=None)
    def test_matches_definition(self, instance):
        g, X, Q, phi = instance
        got = restricted_neighborhood(g, X, Q, phi).tolist()
        assert got == neighborhood_by_enumeration(g, X, Q, phi)
        assert not set(got) & X

    @given(neighborhood_instances(), st.data())
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_colors_and_forbidden(self, instance, data):
        g, X, Q, phi = instance
        extra = set(data.draw(st.lists(st.sampled_from(range(g.color_count))))) if g.color_count else set()
        small = set(restricted_neighborhood(g, X, Q, phi).tolist())
        bigger_q = set(restricted_neighborhood(g, X, Q | extra, phi).tolist())
        assert small <= bigger_q

        grown = ForbiddenMap(phi.default.union(ForbiddenSet.of(g, [0])), phi.overrides)
        assert set(restricted_neighborhood(g, X, Q, grown).tolist()) <= small


# ── sample_colors ───────────────────────────────────────────────────────────────

class TestSampleColors:
    def test_extremes(self):
        assert not sample_colors(50, 0.0, seed=1).any()
        assert sample_colors(50, 1.0, seed=1).all()

    def test_bad_probability(self):
        with pytest.raises(BadProbabilityError):
            sample_colors(10, 1.5, seed=0)

    def test_deterministic(self):
        assert np.array_equal(sample_colors(100, 0.3, 42), sample_colors(100, 0.3, 42))

    def test_concentration(self):
        sizes = [int(sample_colors(10_000, 0.5, seed).sum()) for seed in range(100)]
        assert 4800 <= np.mean(sizes) <= 5200


# ── measure_expansion ───────────────────────────────────────────────────────────

class TestMeasureExpansion:
    def test_isolated_component_never_expands(self):
        g = build(8, [(0, 1, 0), (2, 3, 0), (3, 4, 1)])
        report = measure_expansion(g, [0, 1], ForbiddenMap.empty(g), 1.0, trials=5, seed=0)
        assert report.observed == [0] * 5
        assert report.success_fraction == 0.0

    def test_full_palette_sees_whole_neighborhood(self):
        g = random_colored(60, 8.0, seed=3)
        B = list(range(10))
        expected = len(restricted_neighborhood(g, B, range(g.color_count), ForbiddenMap.empty(g)))
        report = measure_expansion(g, B, ForbiddenMap.empty(g), 1.0, trials=4, seed=9)
        assert report.observed == [expected] * 4

    def test_bound_at_two(self):
        # log|B| = 1 at |B| = 2
        assert expansion_bound(100, 2) == pytest.approx(min(0.5, 2 * np.log2(200 / 6) / 8))

    @pytest.mark.parametrize("B", [[0], list(range(5))], ids=["singleton", "over-half"])
    def test_bad_set_size(self, B):
        g = path_graph(8)
        with pytest.raises(BadSetSizeError):
            measure_expansion(g, B, ForbiddenMap.empty(g), 0.5, 3, 0)

    def test_report_fields(self):
        g = hypercube(6)
        report = measure_expansion(g, range(8), ForbiddenMap.empty(g), 0.5, trials=20, seed=1)
        assert report.trials == 20
        assert report.observed == sorted(report.observed)
        assert 0.0 <= report.success_fraction <= 1.0
