import argparse
import json
import logging
import random
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, List, Optional, TextIO

from checker.session import FAIL, Budget, CheckResult, run_check
from constants.defaults import (
    DEFAULT_HARD_CAP_FACTOR,
    DEFAULT_JOBS,
    DEFAULT_MAX_ACTIONS,
    DEFAULT_POLL_MS,
    DEFAULT_RUNS,
    DEFAULT_SUBSCRIPT,
    DEFAULT_SWEEP_MAX_ACTIONS,
    DEFAULT_SWEEP_RUNS_PER,
    DEFAULT_SWEEP_SUBSCRIPTS,
    FORMAT_HUMAN,
    REPORT_FORMATS,
)
from constants.exit_codes import EXIT_CONFIG_ERROR, EXIT_PASS, EXIT_RUNTIME_ERROR
from executor.endpoint import Endpoint, connector, parse_endpoint
from executor.model import load_model
from executor.server import serve_stream, serve_tcp
from pipelines.subscript_sweep import run_sweep, save_sweep, sweep_csv
from speclang.deps import analyze_deps
from speclang.elaborate import CheckConfig, ElaboratedSpec
from speclang.loader import load_program, load_spec
from speclang.printer import dump_program, print_program
from utils.errors import StromError
from utils.io import write_text
from utils.log import configure_logging
from views.check_report import exit_code, report

logger = logging.getLogger(__name__)

CMD_CHECK = "check"
CMD_DEPS = "deps"
CMD_PARSE = "parse"
CMD_SERVE = "serve"
CMD_SWEEP = "sweep"


class ConfigError(StromError):
    pass


class RunFailed(StromError):
    """A check or sweep stopped after it had started driving the executor."""

    def __init__(self, cause: Exception):
        super().__init__(str(cause))
        self.cause = cause


@contextmanager
def _running() -> Iterator[None]:
    try:
        yield
    except (StromError, OSError) as e:
        raise RunFailed(e) from e


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigError(message)


@dataclass(frozen=True)
class RunConfig:
    spec_path: str
    executor: Endpoint
    runs: int = DEFAULT_RUNS
    max_actions: int = DEFAULT_MAX_ACTIONS
    hard_cap_factor: int = DEFAULT_HARD_CAP_FACTOR
    default_subscript: int = DEFAULT_SUBSCRIPT
    seed: Optional[int] = None
    fail_fast: bool = False
    report_format: str = FORMAT_HUMAN
    jobs: int = DEFAULT_JOBS
    poll_ms: int = DEFAULT_POLL_MS
    realtime: bool = False
    output: Optional[str] = None

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError("--runs must be at least 1")
        if self.max_actions < 1:
            raise ConfigError("--max-actions must be at least 1")
        if self.hard_cap_factor < 1:
            raise ConfigError("--hard-cap-factor must be at least 1")
        if self.default_subscript < 0:
            raise ConfigError("--default-subscript must not be negative")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ConfigError("--seed must fit in 64 unsigned bits")
        if self.report_format not in REPORT_FORMATS:
            raise ConfigError(f"--format must be one of {', '.join(REPORT_FORMATS)}")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.poll_ms < 1:
            raise ConfigError("--poll-ms must be at least 1")

    @property
    def budget(self) -> Budget:
        return Budget.scaled(self.runs, self.max_actions, self.hard_cap_factor)


def _add_run_arguments(parser: argparse.ArgumentParser, runs: int, max_actions: int) -> None:
    parser.add_argument("spec", help="Specification file (.strom).")
    parser.add_argument(
        "--executor",
        required=True,
        help="model:PATH, cmd:COMMAND or tcp:HOST:PORT.",
    )
    parser.add_argument("--runs", type=int, default=runs)
    parser.add_argument("--max-actions", type=int, default=max_actions)
    parser.add_argument("--hard-cap-factor", type=int, default=DEFAULT_HARD_CAP_FACTOR)
    parser.add_argument("--seed", type=int, default=None, help="Defaults to a fresh random seed, always printed.")
    parser.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Runs executed concurrently.")
    parser.add_argument("--poll-ms", type=int, default=DEFAULT_POLL_MS)
    parser.add_argument("--realtime", action="store_true", help="Map logical milliseconds to wall-clock time.")
    parser.add_argument("--output", default=None, help="Write the report here instead of stdout.")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="strom", description="Property-based acceptance testing with QuickLTL.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    check = commands.add_parser(CMD_CHECK, help="Check a specification against an executor.")
    _add_run_arguments(check, DEFAULT_RUNS, DEFAULT_MAX_ACTIONS)
    check.add_argument("--default-subscript", type=int, default=DEFAULT_SUBSCRIPT)
    check.add_argument("--fail-fast", action="store_true")
    check.add_argument("--format", choices=REPORT_FORMATS, default=FORMAT_HUMAN)

    parse = commands.add_parser(CMD_PARSE, help="Dump the syntax tree of a specification.")
    parse.add_argument("spec")
    parse.add_argument("--print", action="store_true", help="Pretty-print the source instead of dumping JSON.")

    deps = commands.add_parser(CMD_DEPS, help="List the state fields a property depends on.")
    deps.add_argument("spec")
    deps.add_argument("property", nargs="?", default=None)

    sweep = commands.add_parser(CMD_SWEEP, help="Detection rate and cost across default subscripts.")
    _add_run_arguments(sweep, DEFAULT_SWEEP_RUNS_PER, DEFAULT_SWEEP_MAX_ACTIONS)
    sweep.add_argument(
        "--subscripts",
        default=",".join(str(s) for s in DEFAULT_SWEEP_SUBSCRIPTS),
        help="Comma-separated default subscripts.",
    )
    sweep.add_argument("--property", default=None)

    serve = commands.add_parser(CMD_SERVE, help="Serve a model executor on stdio or TCP.")
    serve.add_argument("model")
    serve.add_argument("--tcp", default=None, metavar="HOST:PORT")
    serve.add_argument("--realtime", action="store_true")

    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        spec_path=args.spec,
        executor=parse_endpoint(args.executor),
        runs=args.runs,
        max_actions=args.max_actions,
        hard_cap_factor=args.hard_cap_factor,
        default_subscript=getattr(args, "default_subscript", DEFAULT_SUBSCRIPT),
        seed=args.seed,
        fail_fast=getattr(args, "fail_fast", False),
        report_format=getattr(args, "format", FORMAT_HUMAN),
        jobs=args.jobs,
        poll_ms=args.poll_ms,
        realtime=args.realtime,
        output=args.output,
    )


def _emit(text: str, output: Optional[str], out: TextIO) -> None:
    if output is None:
        out.write(text)
    else:
        write_text(output, text)


def _resolve_seed(seed: Optional[int], err: TextIO) -> int:
    if seed is None:
        seed = random.SystemRandom().getrandbits(63)
    err.write(f"seed: {seed}\n")

    return seed


def check_for(spec: ElaboratedSpec, property_name: Optional[str]) -> CheckConfig:
    """
    The check statement covering a property, or a check over all actions
    when no statement names it.
    """
    if property_name is None:
        if not spec.checks:
            raise ConfigError("the specification has no check statement")
        return spec.checks[0]
    for check in spec.checks:
        if property_name in check.properties:
            return CheckConfig((property_name,), check.allowed, check.default_subscript)
    if property_name not in spec.properties:
        raise ConfigError(f"no property named '{property_name}'")

    return CheckConfig((property_name,), None)


def cmd_check(config: RunConfig, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    _, spec = load_spec(config.spec_path, config.default_subscript)
    connect = connector(config.executor, config.realtime)
    seed = _resolve_seed(config.seed, err)

    results: List[CheckResult] = []
    targets = [(check, name) for check in spec.checks for name in check.properties]
    with _running():
        for check, property_name in targets:
            result = run_check(
                spec,
                check,
                property_name,
                connect,
                seed,
                config.budget,
                config.jobs,
                config.fail_fast,
                config.poll_ms,
            )
            results.append(result)
            if config.fail_fast and result.overall == FAIL:
                break
    _emit(report(results, config.report_format), config.output, out)

    return exit_code(results)


def cmd_deps(spec_path: str, property_name: Optional[str], out: TextIO = sys.stdout) -> int:
    _, spec = load_spec(spec_path)
    deps = sorted(analyze_deps(spec, check_for(spec, property_name)))
    out.write(json.dumps(deps) + "\n")

    return EXIT_PASS


def cmd_parse(spec_path: str, pretty: bool = False, out: TextIO = sys.stdout) -> int:
    program = load_program(spec_path)
    if pretty:
        out.write(print_program(program))
    else:
        out.write(json.dumps(dump_program(program), indent=2) + "\n")

    return EXIT_PASS


def cmd_serve(model_path: str, tcp: Optional[str], realtime: bool) -> int:
    model = load_model(model_path)
    if tcp is None:
        serve_stream(model, sys.stdin, sys.stdout, realtime)
        return EXIT_PASS
    host, sep, port = tcp.rpartition(":")
    if not sep or not port.isdigit():
        raise ConfigError(f"expected HOST:PORT, got '{tcp}'")
    serve_tcp(model, host or "127.0.0.1", int(port), realtime)

    return EXIT_PASS


def parse_subscripts(text: str) -> List[int]:
    try:
        subscripts = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"--subscripts must be comma-separated integers: {e}") from e
    if not subscripts or any(s < 0 for s in subscripts):
        raise ConfigError("--subscripts needs at least one non-negative integer")

    return subscripts


def cmd_sweep(
    config: RunConfig,
    subscripts: List[int],
    property_name: Optional[str],
    out: TextIO = sys.stdout,
    err: TextIO = sys.stderr,
) -> int:
    _, spec = load_spec(config.spec_path)
    check_for(spec, property_name)
    connect = connector(config.executor, config.realtime)
    seed = _resolve_seed(config.seed, err)
    with _running():
        sweep_df = run_sweep(
            config.spec_path,
            connect,
            subscripts,
            config.runs,
            seed,
            config.max_actions,
            property_name,
            config.jobs,
        )
    if config.output is None:
        out.write(sweep_csv(sweep_df))
    else:
        save_sweep(config.output, sweep_df)

    return EXIT_PASS


def _dispatch(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    if args.command == CMD_CHECK:
        return cmd_check(_run_config(args), out, err)
    if args.command == CMD_PARSE:
        return cmd_parse(args.spec, args.print, out)
    if args.command == CMD_DEPS:
        return cmd_deps(args.spec, args.property, out)
    if args.command == CMD_SWEEP:
        return cmd_sweep(_run_config(args), parse_subscripts(args.subscripts), args.property, out, err)

    return cmd_serve(args.model, args.tcp, args.realtime)


def run_cli(
    argv: Optional[List[str]] = None,
    out: TextIO = sys.stdout,
    err: TextIO = sys.stderr,
) -> int:
    """
    Runs one command and returns its exit code. Errors raised while setting
    up are configuration errors; errors raised while driving the executor
    are runtime errors.
    """
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        return _dispatch(args, out, err)
    except RunFailed as e:
        logger.debug("Run aborted", exc_info=True)
        err.write(f"error: {e}\n")
        return EXIT_RUNTIME_ERROR
    except (StromError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        err.write(f"error: {e}\n")
        return EXIT_CONFIG_ERROR
