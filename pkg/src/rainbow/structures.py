"""Certificate-level value types shared by the search and the verifier."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class RainbowPath:
    """Vertex sequence with the color of every hop; len(colors) == len(vertices) − 1."""

    vertices: tuple[int, ...]
    colors: tuple[int, ...]

    @classmethod
    def trivial(cls, v: int) -> "RainbowPath":
        return cls((v,), ())

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.colors)

    @property
    def interior(self) -> tuple[int, ...]:
        return self.vertices[1:-1]

    def reversed(self) -> "RainbowPath":
        return RainbowPath(self.vertices[::-1], self.colors[::-1])


@dataclass(frozen=True)
class RainbowCycle:
    """Closed walk: vertices[0] == vertices[-1]; one color per edge."""

    vertices: tuple[int, ...]
    colors: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.colors)


@dataclass(frozen=True)
class SearchStats:
    rounds_used: int = 0      # deepest sprinkling round that contributed to an accepted path
    connect_calls: int = 0
    attempts: int = 0         # color partitions tried across all calls


@dataclass(frozen=True)
class SubdivisionCertificate:
    """t branch vertices and one path per pair (i, j), i < j, running branch[i] → branch[j]."""

    branch: tuple[int, ...]
    paths: dict[tuple[int, int], RainbowPath]
    stats: SearchStats = field(default_factory=SearchStats, compare=False)

    @property
    def t(self) -> int:
        return len(self.branch)

    def path_lengths(self) -> list[int]:
        return [p.length for _, p in sorted(self.paths.items())]
