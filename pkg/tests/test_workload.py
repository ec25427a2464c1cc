import pytest

from vfc_oracle.core.cut import CutOracle, SteinerCutOracle
from vfc_oracle.core.exceptions import WorkloadError
from vfc_oracle.core.models import CommandKind
from vfc_oracle.core.oracle import Oracle
from vfc_oracle.services.workload import WorkloadRunner, parse_workload, run_workload

from .strategies import cycle, path


def test_parse_skips_comments_and_blank_lines():
    commands = parse_workload("# header\nU 0 3\n\nQ 1 2  # same arc\nC\nS 4\n")
    assert [c.kind for c in commands] == [CommandKind.UPDATE, CommandKind.QUERY, CommandKind.CUT, CommandKind.STEINER]
    assert commands[0].vertices == (0, 3)
    assert commands[1].line == 4
    assert commands[2].vertices == ()


@pytest.mark.parametrize(
    "text, line",
    [
        ("X 1 2\n", 1),
        ("U 0\nQ 1\n", 2),
        ("Q 1 2 3\n", 1),
        ("U a\n", 1),
        ("U 1\nU -2\n", 2),
    ],
)
def test_parse_errors_carry_the_line(text, line):
    with pytest.raises(WorkloadError) as info:
        parse_workload(text)
    assert info.value.index == line


def test_parse_rejects_invalid_utf8_with_line():
    with pytest.raises(WorkloadError) as info:
        parse_workload(b"U 0\nQ 1 \xfe2\n")
    assert info.value.index == 2


def test_cycle_workload_answers():
    oracle = Oracle.preprocess(cycle(6), 2)
    report = run_workload(oracle, parse_workload(b"U 0 3\nQ 1 2\nQ 1 4\n"), seed=7)
    assert report.answers == [True, False]
    assert report.seed == 7
    assert report.build.n == 6
    assert report.query.operations > 0


def test_empty_workload():
    report = run_workload(Oracle.preprocess(cycle(6), 2), [])
    assert report.answers == []
    assert report.without_timings()["update"] == {"operations": 0}


def test_cut_commands_restore_the_failure_set():
    oracle = Oracle.preprocess(cycle(6), 2)
    cut = CutOracle(oracle.graph, 2, oracle)
    steiner = SteinerCutOracle(oracle.graph, 2, oracle, [1, 4])
    commands = parse_workload("U 0 3\nC 1\nS 0 3\nC 0 3\nQ 1 2\nQ 1 4\n")
    report = WorkloadRunner(oracle, cut, steiner).run(commands)
    assert report.answers == [1, 2, 2, True, False]


def test_steiner_command_needs_terminals():
    oracle = Oracle.preprocess(path(3), 1)
    with pytest.raises(WorkloadError) as info:
        run_workload(oracle, parse_workload("U 1\nS 1\n"), CutOracle(oracle.graph, 1, oracle))
    assert info.value.index == 2


def test_contract_errors_become_workload_errors():
    oracle = Oracle.preprocess(path(3), 1)
    with pytest.raises(WorkloadError) as info:
        run_workload(oracle, parse_workload("Q 0 1\n"))
    assert info.value.index == 1
    with pytest.raises(WorkloadError) as info:
        run_workload(oracle, parse_workload("U 0\nU 0 1\n"))
    assert info.value.index == 2
