import json

import pytest

from vfc_oracle.__main__ import main, parse_terminals
from vfc_oracle.core.exceptions import GraphFormatError

C6 = "p 6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n"


@pytest.fixture
def c6_file(tmp_path):
    path = tmp_path / "c6.txt"
    path.write_text(C6)
    return str(path)


def test_build_prints_summary(c6_file, capsys):
    assert main(["build", "--graph", c6_file, "--k", "2", "--config", "main"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["n"] == 6
    assert summary["k"] == 2
    assert summary["config"] == "main"


def test_build_writes_dot(c6_file, tmp_path):
    dot = tmp_path / "tree.dot"
    assert main(["build", "--graph", c6_file, "--k", "2", "--dot", str(dot)]) == 0
    assert dot.read_text().startswith("graph decomposition {")


def test_build_rejects_bad_input(tmp_path, c6_file):
    bad = tmp_path / "bad.txt"
    bad.write_text("p 2 1\n0 5\n")
    assert main(["build", "--graph", str(bad), "--k", "1"]) == 2
    assert main(["build", "--graph", c6_file, "--k", "0"]) == 2
    assert main(["build", "--graph", str(tmp_path / "missing.txt"), "--k", "1"]) == 2


def test_run_writes_report(c6_file, tmp_path):
    workload = tmp_path / "w.txt"
    workload.write_text("U 0 3\nQ 1 2\nQ 1 4\n")
    out = tmp_path / "report.json"
    argv = ["run", "--graph", c6_file, "--k", "2", "--workload", str(workload), "--json-out", str(out), "--seed", "4"]
    assert main(argv) == 0
    report = json.loads(out.read_text())
    assert report["answers"] == [True, False]
    assert report["seed"] == 4
    assert report["build"]["n"] == 6


def test_run_with_terminals(c6_file, tmp_path, capsys):
    workload = tmp_path / "w.txt"
    workload.write_text("S 0 3\nC 0 3\n")
    terminals = tmp_path / "a.txt"
    terminals.write_text("1  # one arc\n2\n")
    assert main(["run", "--graph", c6_file, "--k", "2", "--workload", str(workload), "--terminals", str(terminals)]) == 0
    assert json.loads(capsys.readouterr().out)["answers"] == [1, 2]


def test_run_steiner_without_terminals_fails(c6_file, tmp_path):
    workload = tmp_path / "w.txt"
    workload.write_text("S 0\n")
    assert main(["run", "--graph", c6_file, "--k", "2", "--workload", str(workload)]) == 2


def test_verify_without_trials(capsys):
    assert main(["verify", "--trials", "0"]) == 0


def test_parse_terminals():
    assert parse_terminals("3 1\n# none\n2\n") == [3, 1, 2]
    with pytest.raises(GraphFormatError) as info:
        parse_terminals("1\nx\n")
    assert info.value.line == 2


def test_undecodable_input_files_exit_with_format_error(c6_file, tmp_path):
    graph = tmp_path / "latin1.txt"
    graph.write_bytes(b"p 2 1\n0 1\xff\n")
    assert main(["build", "--graph", str(graph), "--k", "1"]) == 2

    workload = tmp_path / "w.txt"
    workload.write_bytes(b"Q 0 \xff1\n")
    assert main(["run", "--graph", c6_file, "--k", "2", "--workload", str(workload)]) == 2

    workload.write_text("S 0\n")
    terminals = tmp_path / "a.txt"
    terminals.write_bytes(b"1\n\xc3\n")
    argv = ["run", "--graph", c6_file, "--k", "2", "--workload", str(workload), "--terminals", str(terminals)]
    assert main(argv) == 2
