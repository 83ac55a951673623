"""
Monte Carlo threshold scan.

One cell per (n, trial). Each cell generates a graph from the configured family
at target average degree c·(log2 n)^alpha, runs the TK_t builder, re-verifies
any certificate, and appends one row to the CSV and to the JSON-lines sidecar.
Rows are flushed as they are written, so an interrupted scan can be resumed:
cells whose (n, seed) is already in the CSV are skipped.
"""

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from pydantic import ValidationError

from rainbow.certificates import certificate_to_json, save_text
from rainbow.colored_graph import ColoredGraph
from rainbow.generators import complete_graph, hypercube, jung_union, random_colored
from rainbow.rainbow_search import build_tkt, cycle_from_certificate
from rainbow.verifier import verify_cycle, verify_subdivision
from shared.errors import ConfigError, GraphIOError, RainbowError, SearchFailure, SearchTimeoutError
from shared.models import CSV_COLUMNS, ExperimentConfig, ResultRow, SearchParams
from shared.rng import derive_seed

logger = logging.getLogger(__name__)

_SEARCH_KEYS = {"p_c", "lambda", "rounds", "max_len", "retries", "pair_retries", "extract"}
_LIST_KEYS = {"n_values"}


# ── Config file ───────────────────────────────────────────────────────────────

def parse_config(text: str) -> ExperimentConfig:
    """Flat ``key=value`` lines; ``#`` comments; search knobs sit beside scan knobs."""
    top: dict[str, object] = {}
    search: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"Line {lineno}: expected key=value, got {raw!r}", line=lineno)
        if key in _LIST_KEYS:
            top[key] = [item.strip() for item in value.replace(",", " ").split()]
        elif key in _SEARCH_KEYS:
            search[key] = value
        elif key in ExperimentConfig.model_fields and key != "params":
            top[key] = value
        else:
            raise ConfigError(f"Line {lineno}: unknown key {key!r}", line=lineno)

    try:
        return ExperimentConfig(**top, params=SearchParams(**search))
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise ConfigError(f"Invalid scan config: {where}: {first['msg']}")


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphIOError(f"Cannot read config {path}: {exc}")
    return parse_config(text)


# ── Cells ─────────────────────────────────────────────────────────────────────

def target_degree(config: ExperimentConfig, n: int) -> float:
    return config.c * math.log2(n) ** config.alpha


def cell_seed(config: ExperimentConfig, n: int, trial: int) -> int:
    return derive_seed(config.seed, n, trial)


def cell_graph(config: ExperimentConfig, n: int, seed: int) -> ColoredGraph:
    """A family member with about n vertices and average degree near the target."""
    target = target_degree(config, n)
    match config.family:
        case "random":
            return random_colored(n, min(target, n - 1), derive_seed(seed, 0))
        case "hypercube":
            return hypercube(max(1, n.bit_length() - 1))
        case "complete":
            return complete_graph(n)
        case "jung_union":
            side = max(1, min(round(target), n // 2))
            return jung_union(max(1, n // (2 * side)), side)
    raise ConfigError(f"Unknown family {config.family!r}")


def sidecar_path(output: Path, n: int, seed: int) -> Path:
    return output.with_name(f"{output.name}.{n}.{seed}.cert.json")


def run_cell(config: ExperimentConfig, n: int, trial: int) -> tuple[ResultRow, str | None]:
    """One (n, trial) cell. Failures become rows; only a verified certificate is returned."""
    seed = cell_seed(config, n, trial)
    target = target_degree(config, n)
    started = time.perf_counter()

    def row(**fields) -> ResultRow:
        elapsed = (time.perf_counter() - started) * 1000
        return ResultRow(n=n, target_d=target, t=config.t, seed=seed, wall_time_ms=elapsed, **fields)

    try:
        g = cell_graph(config, n, seed)
    except RainbowError as exc:
        logger.error("cell n=%d seed=%d: generation failed: %s", n, seed, exc.detail)
        return row(realized_d=0.0, success=False, status="error"), None
    realized = 2 * g.m / g.n if g.n else 0.0

    # The cell limit covers generation too; the search gets what is left.
    remaining = config.time_limit - (time.perf_counter() - started)
    if remaining <= 0:
        logger.info("cell n=%d seed=%d: timeout during generation", n, seed)
        return row(realized_d=realized, success=False, status="timeout"), None
    params = config.params.model_copy(update={"seed": seed, "time_limit": remaining})
    try:
        cert = build_tkt(g, config.t, params)
    except SearchTimeoutError:
        logger.info("cell n=%d seed=%d: timeout", n, seed)
        return row(realized_d=realized, success=False, status="timeout"), None
    except SearchFailure as exc:
        logger.info("cell n=%d seed=%d: %s", n, seed, exc.code)
        return row(realized_d=realized, success=False, status="failed"), None
    except RainbowError as exc:
        logger.warning("cell n=%d seed=%d: %s: %s", n, seed, exc.code, exc.detail)
        return row(realized_d=realized, success=False, status="error"), None

    verdict = verify_subdivision(g, cert)
    if verdict.ok and config.t == 3:
        verdict = verify_cycle(g, cycle_from_certificate(cert))
    if not verdict.ok:
        logger.error("cell n=%d seed=%d: certificate rejected: %s", n, seed, verdict.violations)
        return row(realized_d=realized, success=False, status="error"), None

    lengths = cert.path_lengths()
    return (
        row(
            realized_d=realized,
            success=True,
            path_len_max=max(lengths),
            path_len_mean=sum(lengths) / len(lengths),
            rounds_used=cert.stats.rounds_used,
            status="ok",
        ),
        certificate_to_json(cert),
    )


def _run_cell_args(args: tuple[ExperimentConfig, int, int]) -> tuple[ResultRow, str | None]:
    return run_cell(*args)


# ── Output ────────────────────────────────────────────────────────────────────

def completed_cells(output: Path) -> set[tuple[int, int]]:
    """(n, seed) of every row already in ``output``; empty if the file does not exist."""
    if not output.exists():
        return set()
    with output.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return set()
        if tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ConfigError(f"{output} has columns {reader.fieldnames}, expected {list(CSV_COLUMNS)}")
        return {(int(r["n"]), int(r["seed"])) for r in reader}


def read_rows(output: str | Path) -> list[dict[str, str]]:
    with Path(output).open(newline="") as fh:
        return list(csv.DictReader(fh))


def success_fractions(output: str | Path) -> dict[int, float]:
    """Per-n fraction of successful rows."""
    totals: dict[int, list[int]] = {}
    for r in read_rows(output):
        hits = totals.setdefault(int(r["n"]), [0, 0])
        hits[0] += r["success"] == "true"
        hits[1] += 1
    return {n: ok / count for n, (ok, count) in sorted(totals.items())}


class _Appender:
    """Serialized CSV + JSON-lines writer; every row is flushed immediately."""

    def __init__(self, output: Path) -> None:
        self.output = output
        self.jsonl = output.with_name(output.name + ".jsonl")
        fresh = not output.exists() or output.stat().st_size == 0
        self._csv_fh = output.open("a", newline="")
        self._jsonl_fh = self.jsonl.open("a")
        self._writer = csv.writer(self._csv_fh)
        if fresh:
            self._writer.writerow(CSV_COLUMNS)
            self._csv_fh.flush()

    def append(self, row: ResultRow, cert_json: str | None) -> None:
        if cert_json is not None:
            save_text(cert_json, sidecar_path(self.output, row.n, row.seed))
        self._writer.writerow(row.csv_values())
        self._csv_fh.flush()
        self._jsonl_fh.write(row.model_dump_json() + "\n")
        self._jsonl_fh.flush()

    def close(self) -> None:
        self._csv_fh.close()
        self._jsonl_fh.close()


def run_threshold_scan(config: ExperimentConfig) -> list[ResultRow]:
    """Run every pending cell in (n, trial) order and return the new rows."""
    output = Path(config.output)
    done = completed_cells(output)
    pending = [
        (config, n, trial)
        for n in config.n_values
        for trial in range(config.trials)
        if (n, cell_seed(config, n, trial)) not in done
    ]
    if done:
        logger.info("resuming %s: %d cells done, %d pending", output, len(done), len(pending))

    try:
        appender = _Appender(output)
    except OSError as exc:
        raise GraphIOError(f"Cannot open scan output {output}: {exc}")

    rows: list[ResultRow] = []
    try:
        if config.workers > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                results = pool.map(_run_cell_args, pending)
                for row, cert_json in results:
                    appender.append(row, cert_json)
                    rows.append(row)
        else:
            for args in pending:
                row, cert_json = run_cell(*args)
                appender.append(row, cert_json)
                rows.append(row)
                logger.info("cell n=%d seed=%d: %s in %.0f ms", row.n, row.seed, row.status, row.wall_time_ms)
    finally:
        appender.close()
    return rows
