"""
Colored edge-list text format.

    # comment
    n 4            (optional header; otherwise n = 1 + max vertex id)
    colors 6       (optional header; color tokens are then literal ColorIds below 6)
    0 1 red        (u v color; the color may be any token)

Without a ``colors`` header, color tokens are interned to dense ColorIds in
first-seen order. ``save`` always writes both headers and integer ids, so a load
of a saved graph reproduces the same ids and color_count, gaps included.
"""

import logging
from pathlib import Path

from rainbow.colored_graph import ColoredGraph, Edge, build
from shared.errors import GraphIOError, ParseError

logger = logging.getLogger(__name__)

_HEADERS = ("n", "colors")


def parse_edge_list(text: str) -> ColoredGraph:
    headers: dict[str, int] = {}
    edges: list[Edge] = []
    palette: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()

        if tokens[0] in _HEADERS:
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise ParseError(f"Line {lineno}: malformed header {line!r}", line=lineno)
            if tokens[0] in headers or edges:
                raise ParseError(f"Line {lineno}: header must precede all edges", line=lineno)
            headers[tokens[0]] = int(tokens[1])
            continue

        if len(tokens) != 3:
            raise ParseError(
                f"Line {lineno}: expected 'u v color', got {line!r}", line=lineno
            )
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"Line {lineno}: vertex ids must be integers", line=lineno)

        if "colors" in headers:
            if not tokens[2].isdigit() or int(tokens[2]) >= headers["colors"]:
                raise ParseError(
                    f"Line {lineno}: color must be an integer below {headers['colors']}",
                    line=lineno,
                )
            color = int(tokens[2])
        else:
            color = palette.setdefault(tokens[2], len(palette))
        edges.append((u, v, color))

    n = headers.get("n")
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return build(n, edges, color_count=headers.get("colors"))


def format_edge_list(g: ColoredGraph) -> str:
    lines = [f"n {g.n}", f"colors {g.color_count}"]
    for u, v, c in sorted(g.edges(), key=lambda e: (e[2], e[0], e[1])):
        lines.append(f"{u} {v} {c}")
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> ColoredGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphIOError(f"Cannot read graph file {path}: {exc}")
    g = parse_edge_list(text)
    logger.info("loaded %s: %r", path, g)
    return g


def save(g: ColoredGraph, path: str | Path) -> None:
    try:
        Path(path).write_text(format_edge_list(g))
    except OSError as exc:
        raise GraphIOError(f"Cannot write graph file {path}: {exc}")


def from_edges(n: int | None, edges: list[tuple[int, int, int | str]]) -> ColoredGraph:
    """Build from inline (u, v, color) triples.

    Integer colors are kept as ColorIds; if any color is a string, all colors are
    treated as tokens and interned in first-seen order, as in the text format.
    """
    if any(isinstance(c, str) for _, _, c in edges):
        palette: dict[str, int] = {}
        edges = [(u, v, palette.setdefault(str(c), len(palette))) for u, v, c in edges]
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return build(n, edges)
