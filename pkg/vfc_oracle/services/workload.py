import logging
import time

from vfc_oracle.core.cut import CutOracle, SteinerCutOracle
from vfc_oracle.core.exceptions import BudgetExceededError, ContractViolation, WorkloadError
from vfc_oracle.core.models import Command, CommandKind, PhaseStats, Report
from vfc_oracle.core.oracle import Oracle

logger = logging.getLogger(__name__)

_ARITY = {CommandKind.QUERY: 2}


def parse_workload(text: bytes | str) -> list[Command]:
    """One command per line: ``U v1 v2 ...``, ``Q u v``, ``C f1 ...`` or ``S f1 ...``.

    Anything after ``#`` is a comment. Errors carry the 1-based line number.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            number = text.count(b"\n", 0, exc.start) + 1
            raise WorkloadError(number, f"invalid UTF-8 byte {text[exc.start]:#04x}") from None
    commands: list[Command] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        try:
            kind = CommandKind(head)
        except ValueError:
            raise WorkloadError(number, f"unknown command {head!r}") from None
        try:
            vertices = tuple(int(a) for a in args)
        except ValueError:
            raise WorkloadError(number, f"non-integer argument in {line!r}") from None
        if kind in _ARITY and len(vertices) != _ARITY[kind]:
            raise WorkloadError(number, f"{kind.value} takes {_ARITY[kind]} vertices, got {len(vertices)}")
        if any(v < 0 for v in vertices):
            raise WorkloadError(number, f"negative vertex in {line!r}")
        commands.append(Command(kind=kind, vertices=vertices, line=number))
    return commands


class WorkloadRunner:
    """Executes commands in order against one oracle and the cut oracles layered on it."""

    def __init__(
        self,
        oracle: Oracle,
        cut: CutOracle | None = None,
        steiner: SteinerCutOracle | None = None,
    ):
        self.oracle = oracle
        self.cut = cut
        self.steiner = steiner
        self._failed: tuple[int, ...] = ()

    def _execute(self, command: Command) -> bool | int | None:
        match command.kind:
            case CommandKind.UPDATE:
                self.oracle.update(command.vertices)
                self._failed = command.vertices
                return None
            case CommandKind.QUERY:
                return self.oracle.query(*command.vertices)
            case CommandKind.CUT:
                if self.cut is None:
                    raise WorkloadError(command.line, "cut queries need a cut oracle")
                answer = self.cut.query(command.vertices)
            case CommandKind.STEINER:
                if self.steiner is None:
                    raise WorkloadError(command.line, "S commands need a terminals file")
                answer = self.steiner.query(command.vertices)
        # Cut queries reuse the connectivity oracle; restore the workload's failure set.
        self.oracle.update(self._failed)
        return answer

    def run(self, commands: list[Command], seed: int | None = None) -> Report:
        answers: list[bool | int | None] = []
        started = time.perf_counter()
        for command in commands:
            try:
                answer = self._execute(command)
            except (BudgetExceededError, ContractViolation) as exc:
                raise WorkloadError(command.line, str(exc)) from exc
            if command.kind is not CommandKind.UPDATE:
                answers.append(answer)
        elapsed = time.perf_counter() - started
        logger.info(f"ran {len(commands)} commands in {elapsed:.3f}s")

        oracle = self.oracle
        return Report(
            build=oracle.build_summary(),
            seed=seed,
            answers=answers,
            update=PhaseStats(
                wall_seconds=oracle.update_stats.wall_seconds, operations=oracle.update_stats.operations
            ),
            query=PhaseStats(wall_seconds=oracle.query_stats.wall_seconds, operations=oracle.query_stats.operations),
        )


def run_workload(
    oracle: Oracle,
    commands: list[Command],
    cut: CutOracle | None = None,
    steiner: SteinerCutOracle | None = None,
    seed: int | None = None,
) -> Report:
    return WorkloadRunner(oracle, cut, steiner).run(commands, seed)
