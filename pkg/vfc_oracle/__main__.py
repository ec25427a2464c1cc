"""Command-line entry point: build oracles, run workloads, verify against brute force."""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from vfc_oracle.core.cut import CutOracle, SteinerCutOracle
from vfc_oracle.core.decomposition import to_dot
from vfc_oracle.core.exceptions import GraphFormatError, OracleError
from vfc_oracle.core.graph import load_graph
from vfc_oracle.core.models import OracleConfigTag
from vfc_oracle.core.oracle import Oracle
from vfc_oracle.services.harness import FAULTS, run_verify
from vfc_oracle.services.workload import parse_workload, run_workload
from vfc_oracle.settings import AppConfig, HarnessConfig, get_config

logger = logging.getLogger(__name__)
console = Console(stderr=True)


def setup_logging(config: AppConfig) -> None:
    if config.logging.rich:
        logging.basicConfig(level=config.logging.level, format="%(message)s", handlers=[RichHandler(console=console)])
    else:
        logging.basicConfig(level=config.logging.level, format=config.logging.format, stream=sys.stderr)


def parse_terminals(text: bytes | str) -> list[int]:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            number = text.count(b"\n", 0, exc.start) + 1
            raise GraphFormatError(number, f"invalid UTF-8 byte {text[exc.start]:#04x}") from None
    terminals: list[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        for token in raw.split("#", 1)[0].split():
            try:
                terminals.append(int(token))
            except ValueError:
                raise GraphFormatError(number, f"terminal {token!r} is not an integer") from None
    return terminals


def _build(args, config: AppConfig) -> Oracle:
    graph = load_graph(Path(args.graph).read_bytes())
    return Oracle.preprocess(graph, args.k, args.config, config)


def cmd_build(args, config: AppConfig) -> int:
    oracle = _build(args, config)
    if args.dot:
        Path(args.dot).write_text(to_dot(oracle.decomposition))
    print(oracle.build_summary().model_dump_json(indent=2))
    return 0


def cmd_run(args, config: AppConfig) -> int:
    oracle = _build(args, config)
    commands = parse_workload(Path(args.workload).read_bytes())
    steiner = None
    if args.terminals:
        terminals = parse_terminals(Path(args.terminals).read_bytes())
        steiner = SteinerCutOracle(oracle.graph, oracle.k, oracle, terminals)
    cut = CutOracle(oracle.graph, oracle.k, oracle)
    report = run_workload(oracle, commands, cut, steiner, seed=args.seed)
    text = report.model_dump_json(indent=2)
    if args.json_out:
        Path(args.json_out).write_text(text)
    else:
        print(text)
    return 0


def cmd_verify(args, config: AppConfig) -> int:
    overrides = {"seed": args.seed, "n_max": args.n_max, "k_max": args.k_max, "trials": args.trials}
    harness = HarnessConfig.model_validate(
        config.harness.model_dump() | {key: value for key, value in overrides.items() if value is not None}
    )
    summary = run_verify(harness, fault=args.fault, app_config=config)
    for mismatch in summary.mismatches:
        console.print(f"[red]mismatch[/red] {mismatch}")
        print(mismatch.model_dump_json(indent=2))
    console.print(f"{summary.trials} graphs, {summary.checks} checks, {len(summary.mismatches)} mismatches")
    return 0 if summary.passed else 1


def main(argv: list[str] | None = None) -> int:
    """Parse arguments and dispatch to a subcommand."""

    parser = argparse.ArgumentParser(prog="vfc-oracle", description="Vertex-failure connectivity oracle")
    sub = parser.add_subparsers(dest="command", required=True)
    configs = [tag.value for tag in OracleConfigTag]

    build = sub.add_parser("build", help="Preprocess a graph and print a build summary")
    run = sub.add_parser("run", help="Execute a workload and print a JSON report")
    for p in (build, run):
        p.add_argument("--graph", required=True, help="Edge-list file")
        p.add_argument("--k", type=int, required=True, help="Failure budget")
        p.add_argument("--config", choices=configs, default=None, help="Time/space tradeoff")
    build.add_argument("--dot", default=None, help="Write the decomposition tree as DOT")
    run.add_argument("--workload", required=True, help="Workload file")
    run.add_argument("--terminals", default=None, help="Terminal set for S commands")
    run.add_argument("--json-out", dest="json_out", default=None, help="Write the report here instead of stdout")
    run.add_argument("--seed", type=int, default=None, help="Seed recorded in the report")

    verify = sub.add_parser("verify", help="Randomized differential check against brute force")
    verify.add_argument("--seed", type=int, default=None, help="Base random seed")
    verify.add_argument("--n-max", dest="n_max", type=int, default=None, help="Maximum vertex count")
    verify.add_argument("--k-max", dest="k_max", type=int, default=None, help="Maximum failure budget")
    verify.add_argument("--trials", type=int, default=None, help="Number of random graphs")
    verify.add_argument("--fault", choices=FAULTS, default=None, help="Inject a known bug")

    args = parser.parse_args(argv)
    config = get_config()
    setup_logging(config)

    handlers = {"build": cmd_build, "run": cmd_run, "verify": cmd_verify}
    try:
        return handlers[args.command](args, config)
    except (OracleError, OSError, ValidationError) as exc:
        console.print(f"[red]error:[/red] {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
