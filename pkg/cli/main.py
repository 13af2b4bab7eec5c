"""Command-line surface: ghz-junk, icnot, validate and report.

Options resolve as built-in defaults < --config JSON file < flags. Exit codes:
0 success, 1 computation or validation failure, 2 usage error.
"""

import argparse
import json
import logging
import sys

import numpy as np
from pydantic import ValidationError

from core.experiment_service import ExperimentService
from models.distribution_model import DistributionKind, GreedyOrder
from models.experiment_model import (
    GhzJunkExperiment,
    GhzJunkMode,
    IcnotExperiment,
    IcnotMode,
    ReportExperiment,
    ValidateExperiment,
)
from parsers.config_parser import ConfigParser
from utils.validators import ConfigurationError, ObjectivityError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _choices(enum):
    return [member.value for member in enum]


def _add_output_flags(parser):
    parser.add_argument("--out", help="curve CSV path, '-' for stdout (default)")
    parser.add_argument("--report", nargs="?", const="-",
                        help="write the JSON report to this path ('-' or bare flag: stdout)")
    parser.add_argument("--threshold", type=float, help="fraction of S(rho_S) to reach (default 0.99)")
    parser.add_argument("--normalize", action=argparse.BooleanOptionalAction,
                        help="quote the plateau level in units of S(rho_S) (default) or in nats")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qdarwin",
        description="Objectivity of two-branch system-environment states: "
                    "mutual information curves, consensus and redundancy.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    # SUPPRESS keeps unset flags out of the namespace so --config values survive
    ghz = commands.add_parser("ghz-junk", argument_default=argparse.SUPPRESS,
                              help="GHZ state with uncorrelated junk qubits")
    ghz.add_argument("--config")
    ghz.add_argument("--n", type=int, help="environment size N")
    ghz.add_argument("--m", type=int, help="number of correlated qubits")
    ghz.add_argument("--mode", choices=_choices(GhzJunkMode))
    ghz.add_argument("--stride", type=int, help="evaluate every stride-th l")
    ghz.add_argument("--count-full", action="store_true",
                     help="weigh fractions holding every correlated qubit by 2S")
    _add_output_flags(ghz)

    icnot = commands.add_parser("icnot", argument_default=argparse.SUPPRESS,
                                help="imperfect-CNOT collision model with random flip probabilities")
    icnot.add_argument("--config")
    icnot.add_argument("--n", type=int, help="environment size N")
    icnot.add_argument("--dist", choices=_choices(DistributionKind))
    icnot.add_argument("--rate", type=float, help="rate of the truncated exponential")
    icnot.add_argument("--p-file", help="flip probabilities, one per line (--dist fixed)")
    icnot.add_argument("--p-out", help="save the flip probabilities drawn in subset mode")
    icnot.add_argument("--samples", type=int, help="draws per estimate (default 10000)")
    icnot.add_argument("--seed", type=int)
    icnot.add_argument("--mode", choices=_choices(IcnotMode))
    icnot.add_argument("--order", choices=_choices(GreedyOrder), help="greedy packing order")
    _add_output_flags(icnot)

    validate = commands.add_parser("validate", argument_default=argparse.SUPPRESS,
                                   help="cross-check closed forms against the statevector oracle")
    validate.add_argument("--config")
    validate.add_argument("--n-max", type=int)
    validate.add_argument("--cases", type=int)
    validate.add_argument("--seed", type=int)

    report = commands.add_parser("report", argument_default=argparse.SUPPRESS,
                                 help="consensus and plateau of a saved curve")
    report.add_argument("--config")
    report.add_argument("--curve", help="curve CSV written by ghz-junk or icnot")
    report.add_argument("--s-system", type=float, help="S(rho_S) of the curve, in nats")
    report.add_argument("--n", type=int, help="environment size (default: largest l)")
    report.add_argument("--level-tol", type=float, help="plateau tolerance around S(rho_S)")
    _add_output_flags(report)
    return parser


def _options(args):
    options = {}
    config_file = getattr(args, "config", None)
    if config_file:
        options.update(ConfigParser(config_file).parse())
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    options.update(flags)
    return options


def _configure_logging(verbose):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def generated_seed():
    return int(np.random.SeedSequence().entropy & 0xFFFFFFFF)


def cmd_ghz_junk(options):
    cfg = GhzJunkExperiment(**options)
    ExperimentService().run_ghz_junk(cfg)
    return EXIT_OK


def cmd_icnot(options):
    cfg = IcnotExperiment(**options)
    seed = cfg.seed
    if seed is None:
        seed = generated_seed()
        print(f"generated seed: {seed}", file=sys.stderr)
        logger.info("no --seed given, using %d", seed)
    ExperimentService().run_icnot(cfg, seed)
    return EXIT_OK


def cmd_validate(options):
    cfg = ValidateExperiment(**options)
    service = ExperimentService()
    checks = service.run_validate(cfg)
    print(f"{'check':<28} {'cases':>7} {'max error':>12} {'tolerance':>10}  status")
    for check in checks:
        status = "ok" if check.passed else "FAIL"
        print(f"{check.name:<28} {check.cases:>7} {check.max_error:>12.3e} "
              f"{check.tolerance:>10.1e}  {status}")
    failed = [check for check in checks if not check.passed]
    for check in failed:
        detail = {"check": check.name, **service.explain_failure(check)}
        print(json.dumps(detail, sort_keys=True), file=sys.stderr)
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_report(options):
    cfg = ReportExperiment(**options)
    ExperimentService().run_report(cfg)
    return EXIT_OK


COMMANDS = {
    "ghz-junk": cmd_ghz_junk,
    "icnot": cmd_icnot,
    "validate": cmd_validate,
    "report": cmd_report,
}


def _first_error(exc: ValidationError):
    error = exc.errors()[0]
    where = ".".join(str(part) for part in error.get("loc", ())) or "options"
    return f"{where}: {error['msg']}"


def main(argv=None):
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](_options(args))
    except ValidationError as exc:
        print(f"error: {_first_error(exc)}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ObjectivityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
