"""This module contains the ``marketlib`` command line entry point.

Exit codes: 0 when the command ran to completion (whatever the verdicts),
1 when ``reproduce-corollary`` deviates from the expected verdicts, 2 for
configuration errors, 3 when an enumeration budget is exceeded and 4 when
an analysis of a valid scenario is refused (for instance a construction
whose hypothesis fails).
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import (
    Optional,
    Sequence,
)

from pyfair.marketlib import __version__
from pyfair.marketlib.audit import (
    AuditReport,
    corollary_deviations,
    describe,
    reproduce_corollary,
    resolve_classifier,
    run_audit,
    scenario_equilibria,
    scenario_flags,
)
from pyfair.marketlib.constants import (
    REPORT_FORMATS,
    SOLUTION_CONCEPTS,
)
from pyfair.marketlib.equilibrium.search import BudgetExceededError
from pyfair.marketlib.manager import ReportManager
from pyfair.marketlib.market.spec import MarketError
from pyfair.marketlib.scenario import (
    Scenario,
    ScenarioError,
    load_scenario,
)
from pyfair.marketlib.utils import (
    canonical_json,
    jsonable,
)

logger = logging.getLogger("pyfair.marketlib")

EXIT_OK = 0
EXIT_DEVIATION = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_ANALYSIS = 4


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="path to scenario JSON file")
    parser.add_argument("--out", help="output path (stdout when omitted)")
    parser.add_argument("--format", choices=REPORT_FORMATS, default=None, help="report format (default: MARKETLIB_REPORT_FORMAT)")
    parser.add_argument("--grid-step", default=None, help="offer grid step in p/q form")
    parser.add_argument("--concept", choices=SOLUTION_CONCEPTS, default=None)
    parser.add_argument("--budget", type=int, default=None, help="maximum number of enumerated profiles")
    parser.add_argument("--seed", type=int, default=None, help="reserved; every command is deterministic and ignores the seed")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with every subcommand."""
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="marketlib", description="Audit fairness of hiring-market classifiers")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("audit", parents=[common], help="run every check of a scenario")

    for name, help_ in (("enumerate", "list equilibria of the scenario market"), ("detect-blatant", "flag blatantly unfair equilibria")):
        sub = commands.add_parser(name, parents=[common], help=help_)
        sub.add_argument("--candidate", default=None, help="candidate whose bilateral market is used")

    commands.add_parser("construct", parents=[common], help="build the scenario's constructed classifier")

    sub = commands.add_parser("check-sce", parents=[common], help="check a profile against the scenario beliefs")
    sub.add_argument("--offer", default=None, help="offer made by the firm in p/q form")
    sub.add_argument("--candidate", default=None)

    sub = commands.add_parser("reproduce-corollary", parents=[common], help="audit the fair yet blatantly unfair constant classifier")
    sub.add_argument("--groups", type=int, default=2, help="number of sensitive groups")
    return parser


def _scenario(args: argparse.Namespace, extra: Optional[dict] = None) -> Scenario:
    if not args.config:
        raise ScenarioError("Missing --config")
    overrides = {"grid_step": args.grid_step, "concept": args.concept, "budget": args.budget}
    overrides.update(extra or {})
    return load_scenario(args.config, overrides)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as f:
            f.write(text)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _emit(report: AuditReport, args: argparse.Namespace) -> None:
    manager = ReportManager(args.format)
    if args.out:
        manager.write(report, args.out)
    else:
        sys.stdout.write(manager.dumps(report))


def _listing(eqset, flags=None) -> dict:
    data = {
        "concept": eqset.concept,
        "belief_space": eqset.belief_space,
        "count": len(eqset),
        "members": [describe(m) for m in eqset],
    }
    if flags is not None:
        data["flags"] = [describe(flag) for flag in flags]
    return data


def _run(args: argparse.Namespace) -> int:
    if args.command == "audit":
        _emit(run_audit(_scenario(args)), args)
    elif args.command == "enumerate":
        eqset = scenario_equilibria(_scenario(args), args.candidate)
        _write(canonical_json(_listing(eqset)) + "\n", args.out)
    elif args.command == "detect-blatant":
        eqset, flags = scenario_flags(_scenario(args), args.candidate)
        _write(canonical_json(_listing(eqset, flags)) + "\n", args.out)
    elif args.command == "construct":
        scenario = _scenario(args)
        classifier = resolve_classifier(scenario)
        if classifier is None:
            raise ScenarioError("Scenario has no classifier")
        decisions = {c: describe(d) for c, d in classifier.decisions(scenario.population).items()}
        _write(canonical_json(jsonable(decisions)) + "\n", args.out)
    elif args.command == "check-sce":
        check = {"id": "equilibrium"}
        if args.offer is not None:
            check["offer"] = args.offer
        if args.candidate is not None:
            check["candidate"] = args.candidate
        _emit(run_audit(_scenario(args, {"checks": [check]})), args)
    else:
        report = reproduce_corollary(args.grid_step or "1/4", args.groups)
        _emit(report, args)
        deviations = corollary_deviations(report)
        if deviations:
            for deviation in deviations:
                logger.error(f"Deviation: {deviation}")
            return EXIT_DEVIATION
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line interface.

    :param argv: Arguments (defaults to ``sys.argv[1:]``).
    :returns: Exit code.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format="%(levelname)s %(name)s: %(message)s")
    if args.seed is not None:
        logger.debug(f"Seed {args.seed} does not affect deterministic checks")

    try:
        return _run(args)
    except BudgetExceededError as exc:
        logger.error(f"Budget exceeded: {exc}")
        return EXIT_BUDGET
    except (ScenarioError, MarketError, OSError) as exc:
        logger.error(f"Configuration error: {exc}")
        return EXIT_CONFIG
    except ValueError as exc:
        logger.error(f"Analysis error: {exc.__class__.__name__}: {exc}")
        return EXIT_ANALYSIS


if __name__ == "__main__":
    raise SystemExit(main())
