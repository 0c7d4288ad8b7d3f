"""
Command-line front end: ``ncw check|normalize|repl|walk|maxwell|oracle|suites``.

Exit status is 0 when every check passes, 1 when any fails and 2 for
usage, syntax and other engine errors.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence, TextIO

from config import config
from discrete import WalkConfig, parse_rational, simulate_walk, walk_to_csv
from errors import NcwError
from maxwell import weyl_maxwell_derivation, yang_mills_curvature_check
from models import SuiteReport, SuiteSpec
from oracle import run_identity
from repl import Repl, describe_error, prompt_lines
from workbench import Workbench

logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncw", description="calculus in non-commutative worlds"
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--log-level", help=f"logging level (default {config.LOG_LEVEL})"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="run a suite, or 'all'")
    check.add_argument("suite")
    check.add_argument("-d", "-n", "--dim", type=int, dest="dim")
    check.add_argument("--maxlen", type=int)
    check.add_argument("--trials", type=int)
    check.add_argument("--seed", type=int)
    check.add_argument("--matrix-dim", type=int)
    check.add_argument("--hamiltonian", help="extra Hamiltonian for 'hamilton'")
    check.add_argument("--horizon", type=int, help="series horizon N")
    check.add_argument("-w", "--world-file")

    normalize = commands.add_parser("normalize", help="print a normal form")
    normalize.add_argument("-w", "--world", default="flat", help="name or file")
    normalize.add_argument("-d", "--dim", type=int)
    normalize.add_argument("-e", "--expr", required=True)

    repl = commands.add_parser("repl", help="interactive session")
    repl.add_argument("-w", "--world", default="flat", help="name or file")
    repl.add_argument("-d", "--dim", type=int)

    walk = commands.add_parser("walk", help="seeded +-delta random walk")
    walk.add_argument("--steps", type=int, default=config.WALK_STEPS)
    walk.add_argument("--delta", default="1/2", help="rational p/q")
    walk.add_argument("--tau", default="1/4", help="rational p/q")
    walk.add_argument("--seed", type=int, default=config.SEED)
    walk.add_argument("--csv", help="write the trajectory to this file")

    maxwell = commands.add_parser("maxwell", help="Maxwell derivation chain")
    maxwell.add_argument("--ym", action="store_true", help="Yang-Mills check")
    maxwell.add_argument("-d", "--dim", type=int, default=config.DEFAULT_DIM)

    oracle = commands.add_parser("oracle", help="random matrix oracle")
    oracle.add_argument("--identity", default="jacobi", help="name or expression")
    oracle.add_argument("--trials", type=int)
    oracle.add_argument("--dim", type=int, help="matrix size")
    oracle.add_argument("--seed", type=int)

    commands.add_parser("suites", help="list the suite catalog")
    return parser


def emit_reports(reports: Sequence[SuiteReport], as_json: bool, out: TextIO) -> int:
    if as_json:
        payload = [report.model_dump(mode="json") for report in reports]
        body = payload[0] if len(payload) == 1 else payload
        print(json.dumps(body, indent=2), file=out)
    else:
        print("\n\n".join(report.render_text() for report in reports), file=out)
        if len(reports) > 1:
            good = sum(1 for report in reports if report.passed)
            print(f"\nsummary: all: {good}/{len(reports)} suites passed", file=out)
    return EXIT_PASS if all(report.passed for report in reports) else EXIT_FAIL


def command_check(args, workbench: Workbench, out: TextIO) -> int:
    spec = SuiteSpec(
        name=args.suite,
        dim=args.dim,
        maxlen=args.maxlen,
        trials=args.trials,
        seed=args.seed,
        matrix_dim=args.matrix_dim,
        hamiltonian=args.hamiltonian,
        horizon=args.horizon,
        world_file=args.world_file,
    )
    if args.suite == "all":
        reports = workbench.run_all(spec)
    else:
        reports = [workbench.run_suite(spec)]
    return emit_reports(reports, args.json, out)


def command_normalize(args, workbench: Workbench, out: TextIO) -> int:
    world = workbench.world(args.world, args.dim)
    result = workbench.normalize(args.expr, world)
    if args.json:
        payload = {"world": world.name, "expr": args.expr, "normal_form": result}
        print(json.dumps(payload), file=out)
    else:
        print(result, file=out)
    return EXIT_PASS


def command_repl(args, workbench: Workbench, out: TextIO) -> int:
    session = Repl(workbench, workbench.world(args.world, args.dim))
    lines = prompt_lines() if sys.stdin.isatty() else sys.stdin
    return session.run(lines, out)


def command_walk(args, workbench: Workbench, out: TextIO) -> int:
    cfg = WalkConfig(
        steps=args.steps,
        delta=parse_rational(args.delta),
        tau=parse_rational(args.tau),
        seed=args.seed,
    )
    report = simulate_walk(cfg)
    if args.csv:
        walk_to_csv(report, args.csv)
        logger.info("wrote %d steps to %s", report.steps, args.csv)
    if args.json:
        print(report.model_dump_json(indent=2), file=out)
    else:
        print(report.render_text(), file=out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def command_maxwell(args, workbench: Workbench, out: TextIO) -> int:
    if args.ym:
        report = yang_mills_curvature_check(args.dim)
    else:
        report = weyl_maxwell_derivation()
    return emit_reports([report], args.json, out)


def command_oracle(args, workbench: Workbench, out: TextIO) -> int:
    report = run_identity(args.identity, args.trials, args.dim, args.seed)
    return emit_reports([report], args.json, out)


def command_suites(args, workbench: Workbench, out: TextIO) -> int:
    definitions = workbench.catalog.get_suite_definitions()
    if args.json:
        print(json.dumps(definitions, indent=2), file=out)
        return EXIT_PASS
    for definition in definitions:
        print(f"{definition['name']:<28} {definition['description']}", file=out)
    return EXIT_PASS


COMMANDS = {
    "check": command_check,
    "normalize": command_normalize,
    "repl": command_repl,
    "walk": command_walk,
    "maxwell": command_maxwell,
    "oracle": command_oracle,
    "suites": command_suites,
}


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    level = (args.log_level or config.LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(level), int):
        print(f"error: unknown log level '{level}'", file=sys.stderr)
        return EXIT_ERROR
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    workbench = Workbench(config)
    workbench.add_world_folder(config.world_dir())
    try:
        return COMMANDS[args.command](args, workbench, out)
    except NcwError as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(describe_error(e), file=sys.stderr)
        return EXIT_ERROR
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
