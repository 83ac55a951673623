import math
from enum import StrEnum
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from shared.config import (
    CELL_TIMEOUT_SECONDS,
    DEFAULT_MAX_LEN,
    DEFAULT_PAIR_RETRIES,
    DEFAULT_RETRIES,
    DEFAULT_SEED,
    SCAN_WORKERS,
)


# ── Generators ────────────────────────────────────────────────────────────────

class GenSpec(BaseModel):
    """Which reference family to build. Only the fields of the chosen family matter."""

    family: Literal["hypercube", "jung_union", "random", "complete"]
    d: Optional[int] = None                    # hypercube dimension
    copies: Optional[int] = None               # jung_union
    side: Optional[int] = None                 # jung_union
    n: Optional[int] = None                    # random / complete
    target_avg_degree: Optional[float] = None  # random
    seed: int = DEFAULT_SEED

    @model_validator(mode="after")
    def _check_family_fields(self) -> "GenSpec":
        match self.family:
            case "hypercube":
                if self.d is None or self.d < 1:
                    raise ValueError("hypercube needs d >= 1")
            case "jung_union":
                if not self.copies or not self.side or self.copies < 1 or self.side < 1:
                    raise ValueError("jung_union needs copies >= 1 and side >= 1")
            case "complete":
                if self.n is None or self.n < 2:
                    raise ValueError("complete needs n >= 2")
            case "random":
                if self.n is None or self.n < 2:
                    raise ValueError("random needs n >= 2")
                if self.target_avg_degree is None or not 0 < self.target_avg_degree < self.n:
                    raise ValueError("random needs 0 < target_avg_degree < n")
        return self


# ── Search ────────────────────────────────────────────────────────────────────

class SearchParams(BaseModel):
    """Tunable constants of the sprinkled search.

    The asymptotic hypotheses (λ ≥ (log log n)^10, l = 32 log n log log n,
    |φ0| ≤ d/16 log n) cannot all hold at desk scale, so every constant is a knob.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    p_c: float = Field(1.0, gt=0.0, le=1.0)
    lam: Optional[float] = Field(None, gt=0.0, alias="lambda")  # None → (log log n)^10
    rounds: Optional[int] = Field(None, ge=1)                   # None → 32 log n log log n
    max_len: int = Field(DEFAULT_MAX_LEN, ge=1)
    retries: int = Field(DEFAULT_RETRIES, ge=0)
    pair_retries: int = Field(DEFAULT_PAIR_RETRIES, ge=0)
    seed: int = DEFAULT_SEED
    extract: bool = True            # False: search the input graph directly (ablation)
    time_limit: Optional[float] = Field(None, gt=0.0)

    def resolve_rounds(self, n: int) -> int:
        """Explicit ``rounds`` if given, else ceil(32·log n·log log n), clamped to [1, max_len]."""
        if self.rounds is not None:
            return min(self.rounds, self.max_len)
        if n < 3:
            return 1
        log_n = math.log2(n)
        return max(1, min(math.ceil(32 * log_n * math.log2(log_n)), self.max_len))

    def resolve_lambda(self, n: int) -> float:
        if self.lam is not None:
            return self.lam
        if n < 3:
            return 1.0
        return max(math.log2(math.log2(n)), 1e-9) ** 10

    def with_seed(self, seed: int) -> "SearchParams":
        return self.model_copy(update={"seed": seed})


# ── Reports ───────────────────────────────────────────────────────────────────

class ExpansionReport(BaseModel):
    trials: int
    set_size: int
    p_c: float
    bound: float               # min(|B|/4, |B| log(2n/3|B|) / 8 log|B|), base-2 logs
    observed: list[int]        # sorted ascending
    success_fraction: float


class ViolationCode(StrEnum):
    NOT_A_PATH = "NotAPath"
    NOT_ADJACENT = "NotAdjacent"
    COLOR_MISMATCH = "ColorMismatch"
    REPEAT_VERTEX = "RepeatVertex"
    REPEAT_COLOR = "RepeatColor"
    FORBIDDEN_VERTEX = "ForbiddenVertex"
    FORBIDDEN_COLOR = "ForbiddenColor"
    ENDPOINT_MISMATCH = "EndpointMismatch"
    PATHS_INTERSECT = "PathsIntersect"
    BRANCH_INSIDE_PATH = "BranchInsidePath"
    GLOBAL_COLOR_REUSE = "GlobalColorReuse"


class Violation(BaseModel):
    code: ViolationCode
    detail: str


class Verdict(BaseModel):
    violations: list[Violation] = []

    @computed_field
    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> set[ViolationCode]:
        return {v.code for v in self.violations}


class CrossCheckReport(BaseModel):
    trials: int
    oracle_found: bool
    oracle_cycle: Optional[list[int]] = None
    search_successes: int
    consistent: bool       # False only for a search success the oracle rules out
    incomplete: bool       # oracle has a witness but every search failed


# ── Certificates (wire format) ────────────────────────────────────────────────

class PathJSON(BaseModel):
    pair: Optional[tuple[int, int]] = None
    vertices: list[int]
    colors: list[int]


class CertificateJSON(BaseModel):
    branch: list[int]
    paths: list[PathJSON]


class CycleJSON(BaseModel):
    vertices: list[int]        # closed: first == last
    colors: list[int]


# ── Experiments ───────────────────────────────────────────────────────────────

CSV_COLUMNS = (
    "n",
    "target_d",
    "realized_d",
    "t",
    "seed",
    "success",
    "path_len_max",
    "path_len_mean",
    "wall_time_ms",
    "rounds_used",
)


class ExperimentConfig(BaseModel):
    family: Literal["hypercube", "jung_union", "random", "complete"] = "random"
    n_values: list[int]
    alpha: float = 2.0         # target d = c·(log2 n)^alpha
    c: float = 1.0
    t: int = Field(3, ge=2)
    trials: int = Field(1, ge=1)
    seed: int = DEFAULT_SEED
    params: SearchParams = SearchParams()
    output: Path = Path("scan.csv")
    time_limit: float = Field(CELL_TIMEOUT_SECONDS, gt=0.0)
    workers: int = Field(SCAN_WORKERS, ge=1)

    @field_validator("n_values")
    @classmethod
    def _sorted_ascending(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("n_values must not be empty")
        if any(a >= b for a, b in zip(v, v[1:])):
            raise ValueError("n_values must be strictly ascending")
        if v[0] < 2:
            raise ValueError("n_values must be >= 2")
        return v


class ResultRow(BaseModel):
    n: int
    target_d: float
    realized_d: float = Field(ge=0.0)
    t: int
    seed: int
    success: bool
    path_len_max: int = 0
    path_len_mean: float = 0.0
    wall_time_ms: float = 0.0
    rounds_used: int = 0
    status: Literal["ok", "failed", "timeout", "error"] = "failed"   # JSON-lines only

    def csv_values(self) -> list[str]:
        return [
            str(self.n),
            f"{self.target_d:.6g}",
            f"{self.realized_d:.6g}",
            str(self.t),
            str(self.seed),
            "true" if self.success else "false",
            str(self.path_len_max),
            f"{self.path_len_mean:.4g}",
            f"{self.wall_time_ms:.1f}",
            str(self.rounds_used),
        ]


# ── API payloads ──────────────────────────────────────────────────────────────

class GraphPayload(BaseModel):
    n: Optional[int] = None                       # default: 1 + max vertex id
    edges: list[tuple[int, int, int | str]]       # color tokens are interned


class MaximalRequest(BaseModel):
    graph: GraphPayload
    omega: Literal["log2", "power"] = "log2"
    alpha: Optional[float] = None
    exact: bool = False


class ConnectRequest(BaseModel):
    graph: GraphPayload
    u: int
    v: int
    params: SearchParams = SearchParams()


class SearchRequest(BaseModel):
    graph: GraphPayload
    t: int = Field(3, ge=2)
    params: SearchParams = SearchParams()


class VerifyRequest(BaseModel):
    graph: GraphPayload
    certificate: dict


class OracleRequest(BaseModel):
    graph: GraphPayload
