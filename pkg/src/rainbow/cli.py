"""
``rainbow`` command-line front end.

Exit codes: 0 on success, 1 on a domain failure (a JSON diagnostic is printed),
2 on usage errors (argparse).
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from rainbow import graph_io
from rainbow.certificates import (
    certificate_to_json,
    cycle_to_json,
    load_certificate,
    path_to_json,
    save_text,
)
from rainbow.colored_graph import ColoredGraph, stats
from rainbow.expansion import ForbiddenMap, ForbiddenSet, measure_expansion
from rainbow.experiment import load_config, run_threshold_scan, success_fractions
from rainbow.generators import generate
from rainbow.omega_maximal import OmegaFunction, brute_force_maximal, extract_maximal
from rainbow.rainbow_search import build_tkt, connect, find_rainbow_cycle
from rainbow.structures import RainbowCycle
from rainbow.verifier import rainbow_cycle_oracle, verify_cycle, verify_subdivision
from shared.config import LOG_LEVEL
from shared.errors import ConfigError, RainbowError
from shared.models import GenSpec, SearchParams

logger = logging.getLogger(__name__)

# Positional arguments of `gen`, per family.
_GEN_ARGS = {
    "hypercube": ("d",),
    "jung_union": ("copies", "side"),
    "complete": ("n",),
    "random": ("n", "target_avg_degree"),
}


def _emit(payload: dict, as_json: bool, text: str | None = None) -> None:
    if as_json or text is None:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _write_or_print(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        save_text(text, output)


# ── Subcommands ───────────────────────────────────────────────────────────────

def cmd_gen(args: argparse.Namespace, params: SearchParams) -> int:
    names = _GEN_ARGS[args.family]
    if len(args.values) != len(names):
        raise ConfigError(f"gen {args.family} takes {len(names)} values: {' '.join(names)}")
    fields = dict(zip(names, args.values))
    try:
        spec = GenSpec(family=args.family, seed=params.seed, **fields)
    except ValidationError as exc:
        raise ConfigError(f"Invalid generator arguments: {exc.errors()[0]['msg']}")
    g = generate(spec)
    _write_or_print(graph_io.format_edge_list(g), args.output)
    if args.output is not None:
        _emit({"output": str(args.output), "n": g.n, "m": g.m, "colors": g.color_count}, args.json,
              f"wrote {g!r} to {args.output}")
    return 0


def cmd_stats(args: argparse.Namespace, params: SearchParams) -> int:
    g = graph_io.load(args.graph)
    s = stats(g)
    payload = s.as_json() | {"colors": g.color_count}
    _emit(payload, args.json,
          f"n={s.n} m={s.m} d={float(s.avg_degree):.4f} δ={s.min_degree} Δ={s.max_degree} colors={g.color_count}")
    return 0


def cmd_maximal(args: argparse.Namespace, params: SearchParams) -> int:
    g = graph_io.load(args.graph)
    omega = OmegaFunction(args.omega, args.alpha) if args.omega == "power" else OmegaFunction()
    result = brute_force_maximal(g, omega) if args.exact else extract_maximal(g, omega)
    _emit(result.as_json(), args.json,
          f"{len(result.vertices)} vertices, ratio {result.ratio:.6f}"
          f"{' (optimal)' if result.certified_optimal else ''}: {list(result.vertices)}")
    return 0


def cmd_expand(args: argparse.Namespace, params: SearchParams) -> int:
    g = graph_io.load(args.graph)
    vertices = [int(x) for x in args.set.split(",") if x.strip()]
    report = measure_expansion(g, vertices, ForbiddenMap.empty(g), params.p_c, args.trials, params.seed)
    _emit(report.model_dump(), args.json,
          f"|B|={report.set_size} bound={report.bound:.3f} success={report.success_fraction:.3f}")
    return 0


def cmd_connect(args: argparse.Namespace, params: SearchParams) -> int:
    g = graph_io.load(args.graph)
    path = connect(g, args.u, args.v, ForbiddenSet.empty(g.n, g.color_count), params)
    _write_or_print(path_to_json(path), args.output)
    return 0


def cmd_find_cycle(args: argparse.Namespace, params: SearchParams) -> int:
    g = graph_io.load(args.graph)
    cycle = find_rainbow_cycle(g, params)
    _write_or_print(cycle_to_json(cycle), args.output)
    return 0


def cmd_find_tkt(args: argparse.Namespace, params: SearchParams) -> int:
    g = graph_io.load(args.graph)
    cert = build_tkt(g, args.t, params)
    _write_or_print(certificate_to_json(cert), args.output)
    return 0


def cmd_verify(args: argparse.Namespace, params: SearchParams) -> int:
    g: ColoredGraph = graph_io.load(args.graph)
    cert = load_certificate(args.certificate)
    verdict = verify_cycle(g, cert) if isinstance(cert, RainbowCycle) else verify_subdivision(g, cert)
    for violation in verdict.violations:
        print(violation.model_dump_json())
    if verdict.ok and args.json:
        print(json.dumps({"ok": True}))
    return 0 if verdict.ok else 1


def cmd_oracle_cycle(args: argparse.Namespace, params: SearchParams) -> int:
    g = graph_io.load(args.graph)
    witness = rainbow_cycle_oracle(g)
    if witness is None:
        _emit({"result": "none"}, args.json, "none")
    else:
        _emit({"result": "cycle", "vertices": list(witness.vertices), "colors": list(witness.colors)},
              args.json, f"cycle {list(witness.vertices)}")
    return 0


def cmd_scan(args: argparse.Namespace, params: SearchParams) -> int:
    config = load_config(args.config)
    if args.output is not None:
        config = config.model_copy(update={"output": args.output})
    rows = run_threshold_scan(config)
    fractions = success_fractions(config.output)
    _emit({"output": str(config.output), "new_rows": len(rows),
           "success_fraction": {str(n): f for n, f in fractions.items()}},
          args.json,
          f"{len(rows)} new rows in {config.output}; success by n: {fractions}")
    return 0


# ── Parser ────────────────────────────────────────────────────────────────────

def _global_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="64-bit master seed")
    common.add_argument("--pc", type=float, dest="p_c", help="color sampling probability p_c")
    common.add_argument("--lambda", type=float, dest="lam", help="expansion constant λ")
    common.add_argument("--rounds", type=int, help="sprinkling rounds l")
    common.add_argument("--retries", type=int, help="color partitions per connect call")
    common.add_argument("--max-len", type=int, dest="max_len", help="cap on the round count")
    common.add_argument("-o", "--output", type=Path, help="write the result here instead of stdout")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="rainbow", description="Rainbow clique subdivisions in properly edge-colored graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a reference graph")
    p.add_argument("family", choices=sorted(_GEN_ARGS))
    p.add_argument("values", nargs="*", help="family parameters, e.g. `hypercube 3` or `random 256 40`")
    p.set_defaults(handler=cmd_gen)

    for name, handler, help_text in (
        ("stats", cmd_stats, "vertex/edge counts and degrees"),
        ("find-cycle", cmd_find_cycle, "search for a rainbow cycle"),
        ("oracle-cycle", cmd_oracle_cycle, "exhaustive rainbow-cycle check (tiny graphs)"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("graph", type=Path)
        p.set_defaults(handler=handler)

    p = sub.add_parser("maximal", parents=[common], help="ω-maximal subgraph")
    p.add_argument("graph", type=Path)
    p.add_argument("--exact", action="store_true", help="exhaustive search (n <= 20)")
    p.add_argument("--omega", choices=("log2", "power"), default="log2")
    p.add_argument("--alpha", type=float, default=0.5, help="exponent for --omega power")
    p.set_defaults(handler=cmd_maximal)

    p = sub.add_parser("expand", parents=[common], help="measure sampled-color expansion of a set")
    p.add_argument("graph", type=Path)
    p.add_argument("--set", required=True, help="comma-separated vertex ids of B")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("connect", parents=[common], help="rainbow path between two vertices")
    p.add_argument("graph", type=Path)
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.set_defaults(handler=cmd_connect)

    p = sub.add_parser("find-tkt", parents=[common], help="search for a rainbow TK_t")
    p.add_argument("t", type=int)
    p.add_argument("graph", type=Path)
    p.set_defaults(handler=cmd_find_tkt)

    p = sub.add_parser("verify", parents=[common], help="check a certificate against a graph")
    p.add_argument("graph", type=Path)
    p.add_argument("certificate", type=Path)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("scan", parents=[common], help="threshold scan from a key=value config")
    p.add_argument("config", type=Path)
    p.set_defaults(handler=cmd_scan)
    return parser


def _configure_logging(verbose: int) -> None:
    level = {0: LOG_LEVEL, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _search_params(args: argparse.Namespace, parser: argparse.ArgumentParser) -> SearchParams:
    given = {
        key: getattr(args, key)
        for key in ("seed", "p_c", "lam", "rounds", "retries", "max_len")
        if getattr(args, key) is not None
    }
    try:
        return SearchParams(**given)
    except ValidationError as exc:
        first = exc.errors()[0]
        parser.error(f"invalid {first['loc'][0]}: {first['msg']}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    params = _search_params(args, parser)

    try:
        return args.handler(args, params)
    except RainbowError as exc:
        logger.debug("%s failed", args.command, exc_info=True)
        print(json.dumps(exc.to_dict(), sort_keys=True, default=list))
        return 1


if __name__ == "__main__":
    sys.exit(main())
