"""catcoh command line: simulate, verify, discriminate"""
import argparse
import json
import logging
import math
import sys
from typing import Any, Dict, List, Optional

from . import __version__
from .config import RunConfig, build_config
from .errors import CatcohError, ConfigError
from .models import DiscriminationRecord, SuiteStatus, SweepRecord, VerifyReport
from .quantum.ladder import DIRICHLET_ZERO
from .services.emitter import open_output, write_records
from .services.evaluators import evaluate_discrimination_point, evaluate_sweep_point
from .services.sweep_queue import run_sweep
from .services.verifier import registry, run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVARIANT_FAILURE = 1
EXIT_CONFIG = 2


class SweepFailure(CatcohError):
    """At least one grid point raised"""


def _gather(points) -> List[Any]:
    failed = [p for p in points if p.error]
    if failed:
        raise SweepFailure(
            f"{len(failed)} grid point(s) failed, first {failed[0].key}: {failed[0].error}"
        )
    return [p.result for p in points]


def cmd_simulate(config: RunConfig) -> List[SweepRecord]:
    jobs = [
        ((L, k), (config, L, k)) for L in config.L for k in range(config.k_max + 1)
    ]
    logger.info(f"Simulating {len(jobs)} grid points")
    return _gather(run_sweep(evaluate_sweep_point, jobs, workers=config.parallel))


def cmd_discriminate(config: RunConfig) -> List[DiscriminationRecord]:
    delta = config.phi - config.theta
    if abs(math.sin(delta / 2)) < DIRICHLET_ZERO:
        raise ConfigError("phi - theta is a multiple of 2*pi; nothing to discriminate")
    jobs = [
        ((L, k), (config, L, k)) for L in config.L for k in range(config.k_max + 1)
    ]
    logger.info(f"Discrimination rows for delta={delta:.6f}: {len(jobs)}")
    return _gather(
        run_sweep(evaluate_discrimination_point, jobs, workers=config.parallel)
    )


def cmd_verify(config: RunConfig, only: Optional[List[str]] = None) -> VerifyReport:
    return run_verification(config, only=only)


def format_report(report: VerifyReport) -> str:
    width = max((len(s.id) for s in report.suites), default=10)
    lines = [f"{'suite'.ljust(width)}  {'status':<12}  {'worst':>10}  {'tol':>7}  checks"]
    for s in report.suites:
        lines.append(
            f"{s.id.ljust(width)}  {s.status.value:<12}  {s.worst_deviation:>10.3e}  "
            f"{s.tolerance:>7.0e}  {s.checks}"
            + (f"  {s.message}" if s.message else "")
        )
    counts = report.counts()
    lines.append(
        f"{counts['passed']} passed, {counts['failed']} failed, "
        f"{counts['domain_error']} domain error(s)"
    )
    return "\n".join(lines)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON or YAML file with flat keys")
    parser.add_argument("--L", dest="L", help="comma-separated reservoir widths")
    parser.add_argument("--k-max", dest="k_max", type=int)
    parser.add_argument("--l0", type=int)
    parser.add_argument("--theta", type=float)
    parser.add_argument("--phi", type=float)
    parser.add_argument("--unitary", choices=["hadamard", "custom"])
    for entry in ("u00", "u01", "u10", "u11"):
        parser.add_argument(f"--{entry}", help="complex entry, e.g. 0.7071+0j")
    parser.add_argument(
        "--shift-convention", dest="shift_convention", choices=["standard", "mirrored"]
    )
    parser.add_argument("--temperature", type=float)
    parser.add_argument("--energy-spacing", dest="energy_spacing", type=float)
    parser.add_argument("--entropy-unit", dest="entropy_unit", choices=["nats", "bits"])
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--out", dest="output", help="output path, '-' for stdout")
    parser.add_argument("--parallel", type=int)
    parser.add_argument(
        "--compare", action="store_const", const=True,
        help="blank runtime_ms so outputs can be compared byte for byte",
    )
    parser.add_argument("--log-level", dest="log_level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catcoh",
        description="Repeated use of a coherence reservoir: simulation and checks",
    )
    parser.add_argument("--version", action="version", version=f"catcoh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common_flags(sub.add_parser("simulate", help="sweep (L, k) and emit records"))

    verify = sub.add_parser("verify", help="run every verification suite")
    _add_common_flags(verify)
    verify.add_argument("--suite", action="append", dest="only", help="run only this suite")
    verify.add_argument("--list", action="store_true", dest="list_suites")
    verify.add_argument(
        "--check-closed-forms", dest="checks_closed_form", action="store_const", const=True
    )
    verify.add_argument(
        "--inject-fault", dest="inject_fault", action="store_const", const=True,
        help=argparse.SUPPRESS,
    )

    _add_common_flags(sub.add_parser("discriminate", help="phase discrimination table"))
    return parser


CONFIG_KEYS = set(RunConfig.model_fields)


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k in CONFIG_KEYS and v is not None}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK

    logging.basicConfig(
        level=(args.log_level or "INFO").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = build_config(_overrides(args), config_path=args.config)
    except ConfigError as e:
        print(f"catcoh: invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "simulate":
            records = cmd_simulate(config)
            write_records(records, SweepRecord, config.output, config.format)
            return EXIT_OK

        if args.command == "discriminate":
            records = cmd_discriminate(config)
            write_records(records, DiscriminationRecord, config.output, config.format)
            return EXIT_OK

        if args.list_suites:
            for suite in registry.list_available():
                print(f"{suite['id']}: {suite['name']}")
            return EXIT_OK
        report = cmd_verify(config, only=args.only)
        print(format_report(report))
        if config.output:
            with open_output(config.output) as stream:
                json.dump(report.model_dump(mode="json"), stream, indent=2)
                stream.write("\n")
        if not report.passed:
            failed = [s.id for s in report.suites if s.status == SuiteStatus.FAILED]
            logger.error(f"Failed suites: {', '.join(failed)}")
            return EXIT_INVARIANT_FAILURE
        return EXIT_OK

    except ConfigError as e:
        print(f"catcoh: invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        print(f"catcoh: {e}", file=sys.stderr)
        return EXIT_INVARIANT_FAILURE
    except CatcohError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"catcoh: {e}", file=sys.stderr)
        return EXIT_INVARIANT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
