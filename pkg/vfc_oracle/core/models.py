from enum import Enum

from pydantic import BaseModel, Field, model_validator


class OracleConfigTag(str, Enum):
    """Time/space tradeoff of an oracle."""

    MAIN = "main"
    FAST_UPDATE = "fast-update"
    LOW_SPACE = "low-space"


class SmallGraphKind(str, Enum):
    TORSO = "torso"
    PROFILE = "profile"
    ADHCONN = "adhconn"


class CommandKind(str, Enum):
    UPDATE = "U"
    QUERY = "Q"
    CUT = "C"
    STEINER = "S"


class FailureSet(BaseModel):
    """A batch of at most ``k`` failed vertices."""

    model_config = {"frozen": True}

    vertices: frozenset[int] = Field(default_factory=frozenset, description="Failed vertex ids")
    k: int = Field(ge=0, description="Failure budget")

    @model_validator(mode="after")
    def _within_budget(self) -> "FailureSet":
        if len(self.vertices) > self.k:
            raise ValueError(f"{len(self.vertices)} failures exceed budget k={self.k}")
        if any(v < 0 for v in self.vertices):
            raise ValueError("vertex ids must be non-negative")
        return self

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def __str__(self):
        return "{" + ", ".join(map(str, sorted(self.vertices))) + "}"


class Command(BaseModel):
    """One workload line."""

    kind: CommandKind = Field(description="Command type")
    vertices: tuple[int, ...] = Field(default=(), description="Command arguments")
    line: int = Field(default=0, description="Source line number")


class PhaseStats(BaseModel):
    wall_seconds: float = Field(default=0.0, description="Wall time spent in the phase")
    operations: int = Field(default=0, description="Elementary operations counted in the phase")


class DecompositionStats(BaseModel):
    nodes: int = Field(description="Number of decomposition nodes")
    height: int = Field(description="Height of the decomposition tree")
    max_bag: int = Field(description="Largest bag size")
    max_adhesion: int = Field(description="Largest adhesion size")
    virtual_root: bool = Field(default=False, description="Whether the root is an empty virtual node")


class BuildSummary(BaseModel):
    """JSON summary printed by ``build``."""

    n: int = Field(description="Vertex count")
    m: int = Field(description="Edge count of the input graph")
    m_sparsified: int = Field(description="Edge count after sparsification")
    k: int = Field(description="Failure budget")
    config: OracleConfigTag = Field(description="Oracle configuration")
    decomposition: DecompositionStats = Field(description="Decomposition statistics")
    shortcut_edges: int = Field(description="Number of tree shortcut edges")
    stored_torsos: int = Field(description="Number of torsos stored on shortcut edges")
    preprocessing: PhaseStats = Field(default_factory=PhaseStats, description="Preprocessing phase")


class Report(BaseModel):
    """Result of running a workload."""

    build: BuildSummary = Field(description="Build metadata")
    seed: int | None = Field(default=None, description="Seed of a generated workload")
    answers: list[bool | int | None] = Field(default_factory=list, description="Per-command answers")
    update: PhaseStats = Field(default_factory=PhaseStats, description="Update phase totals")
    query: PhaseStats = Field(default_factory=PhaseStats, description="Query phase totals")

    def without_timings(self) -> dict:
        return self.model_dump(
            mode="json",
            exclude={
                "build": {"preprocessing": {"wall_seconds"}},
                "update": {"wall_seconds"},
                "query": {"wall_seconds"},
            },
        )


class Mismatch(BaseModel):
    """A differential-harness failure with a replayable reproducer."""

    check: str = Field(description="Which comparison failed")
    n: int = Field(description="Vertex count of the reproducer")
    edges: list[tuple[int, int]] = Field(description="Edges of the reproducer")
    k: int = Field(description="Failure budget")
    failed: list[int] = Field(default_factory=list, description="Failure set")
    pair: tuple[int, int] | None = Field(default=None, description="Queried pair, if any")
    terminals: list[int] | None = Field(default=None, description="Terminal set for Steiner checks")
    expected: bool | int = Field(description="Reference answer")
    actual: bool | int = Field(description="Oracle answer")

    def __str__(self):
        return (
            f"{self.check}: n={self.n} k={self.k} S={self.failed} pair={self.pair} "
            f"expected={self.expected} actual={self.actual} edges={self.edges}"
        )


class VerifySummary(BaseModel):
    trials: int = Field(description="Graphs generated")
    checks: int = Field(description="Individual comparisons made")
    mismatches: list[Mismatch] = Field(default_factory=list, description="Failures found")

    @property
    def passed(self) -> bool:
        return not self.mismatches
