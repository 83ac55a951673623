"""
Exception hierarchy for the rainbow search library.

Every error carries a stable ``code`` (used in CLI/API JSON diagnostics) and a
human-readable ``detail``. Verifiers never raise for certificate defects; they
return a Verdict instead.
"""

from typing import Any


class RainbowError(Exception):
    code = "RainbowError"

    def __init__(self, detail: str, **context: Any) -> None:
        super().__init__(detail)
        self.detail = detail
        self.context = context

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"error": self.code, "detail": self.detail}
        payload.update(self.context)
        return payload


# ── Graph construction ────────────────────────────────────────────────────────

class GraphError(RainbowError):
    code = "GraphError"


class SelfLoopError(GraphError):
    code = "SelfLoop"


class DuplicateEdgeError(GraphError):
    code = "DuplicateEdge"


class ImproperColoringError(GraphError):
    code = "ImproperColoring"


class VertexOutOfRangeError(GraphError):
    code = "VertexOutOfRange"


class EmptyGraphError(GraphError):
    code = "EmptyGraph"


class ParseError(GraphError):
    code = "ParseError"

    def __init__(self, detail: str, line: int) -> None:
        super().__init__(detail, line=line)
        self.line = line


class GraphIOError(RainbowError):
    code = "IoError"


# ── Generators ────────────────────────────────────────────────────────────────

class DimensionOutOfRangeError(RainbowError):
    code = "DimensionOutOfRange"


class SizeOverflowError(RainbowError):
    code = "SizeOverflow"


# ── Maximal subgraphs ─────────────────────────────────────────────────────────

class TooSmallError(RainbowError):
    code = "TooSmall"


class NoEdgesError(RainbowError):
    code = "NoEdges"


class TooLargeError(RainbowError):
    code = "TooLarge"


# ── Sampling / expansion ──────────────────────────────────────────────────────

class BadProbabilityError(RainbowError):
    code = "BadProbability"


class BadSetSizeError(RainbowError):
    code = "BadSetSize"


# ── Search ────────────────────────────────────────────────────────────────────

class SearchFailure(RainbowError):
    """A search gave up. Never a certificate of nonexistence."""

    code = "SearchFailure"


class ForbiddenOriginError(RainbowError):
    code = "ForbiddenOrigin"


class NoConnectionError(SearchFailure):
    code = "NoConnection"

    def __init__(self, detail: str, reach_sizes: list[tuple[int, int]]) -> None:
        super().__init__(detail, reach_sizes=reach_sizes)
        self.reach_sizes = reach_sizes


class TooFewVerticesError(RainbowError):
    code = "TooFewVertices"


class PairFailedError(SearchFailure):
    code = "PairFailed"

    def __init__(self, detail: str, pair: tuple[int, int], partial: Any = None) -> None:
        super().__init__(detail, pair=list(pair))
        self.pair = pair
        self.partial = partial


class NoCycleFoundError(SearchFailure):
    code = "NoCycleFound"


class SearchTimeoutError(SearchFailure):
    code = "Timeout"


class BudgetExceededError(RainbowError):
    code = "BudgetExceeded"


# ── Configuration ─────────────────────────────────────────────────────────────

class ConfigError(RainbowError):
    code = "ConfigError"
