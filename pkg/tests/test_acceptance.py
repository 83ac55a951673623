"""
Acceptance-scale runs. Excluded by default; run with ``pytest -m slow``
(scripts/acceptance.sh does this).
"""

import time

import pytest

from rainbow.certificates import load_certificate
from rainbow.experiment import (
    cell_graph,
    read_rows,
    run_threshold_scan,
    sidecar_path,
    success_fractions,
)
from rainbow.generators import complete_graph, hypercube
from rainbow.rainbow_search import build_tkt, find_rainbow_cycle
from rainbow.verifier import verify_path, verify_subdivision
from shared.errors import NoCycleFoundError, PairFailedError
from shared.models import CSV_COLUMNS, ExperimentConfig, ResultRow, SearchParams
from tests.conftest import emitted_paths

pytestmark = pytest.mark.slow

SCAN_N = [256, 1024, 4096]


@pytest.mark.parametrize("d", range(4, 13))
def test_hypercube_never_yields_a_rainbow_cycle(d):
    g = hypercube(d)
    for seed in range(50):
        with pytest.raises(NoCycleFoundError):
            find_rainbow_cycle(g, SearchParams(seed=seed))


def test_k64_tk4_success_rate():
    g = complete_graph(64)
    successes = 0
    for seed in range(20):
        try:
            cert = build_tkt(g, 4, SearchParams(p_c=0.5, seed=seed))
        except PairFailedError:
            continue
        assert verify_subdivision(g, cert).ok
        successes += 1
    assert successes >= 18


def test_ten_thousand_runs_emit_only_valid_paths():
    emitted = 0
    for seed in range(10_000):
        for g, path, phi0 in emitted_paths(seed):
            verdict = verify_path(g, path, phi0)
            assert verdict.ok, (seed, verdict.violations)
            emitted += 1
    assert emitted > 10_000


def test_random_scan_denser_graphs_do_no_worse(tmp_path):
    started = time.monotonic()
    fractions = {}
    for alpha in (1.0, 2.5):
        config = ExperimentConfig(
            family="random",
            n_values=SCAN_N,
            alpha=alpha,
            c=1.0,
            t=3,
            trials=5,
            seed=1,
            output=tmp_path / f"scan-{alpha}.csv",
        )
        run_threshold_scan(config)

        with config.output.open() as fh:
            assert fh.readline().strip() == ",".join(CSV_COLUMNS)
        rows = [ResultRow.model_validate(r) for r in read_rows(config.output)]
        assert [r.n for r in rows] == [n for n in SCAN_N for _ in range(5)]
        assert all(r.t == 3 for r in rows)
        for r in rows:
            if r.success:
                cert = load_certificate(sidecar_path(config.output, r.n, r.seed))
                assert verify_subdivision(cell_graph(config, r.n, r.seed), cert).ok
        fractions[alpha] = success_fractions(config.output)

    assert time.monotonic() - started < 600
    for n in SCAN_N:
        assert fractions[2.5][n] >= fractions[1.0][n]
