"""
Command-line argument parsing
"""
import argparse
import re
from pathlib import Path
from typing import List, Optional

from src.errors import UsageError
from src.models.cli import CliInvocation, OutputFormat, Subcommand
from src.models.experiment import Estimator, ExperimentConfig
from src.models.glm import LossKind, RidgeConvention

PRESET_NAMES = ["paper-table-1", "paper-table-2"]

_FLAG_PATTERNS = [
    re.compile(r"argument (--[\w-]+)"),
    re.compile(r"unrecognized arguments: (\S+)"),
    re.compile(r"required: (--[\w-]+)"),
]


class _RaisingParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting"""

    def error(self, message):
        flag = None
        for pattern in _FLAG_PATTERNS:
            match = pattern.search(message)
            if match:
                flag = match.group(1)
                break
        raise UsageError(f"{self.prog}: {message}", flag=flag)


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(text)
    return value


def nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(text)
    return value


def positive_float(text: str) -> float:
    value = float(text)
    if not value > 0 or value == float("inf"):
        raise ValueError(text)
    return value


def estimator_list(text: str) -> List[Estimator]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError(text)
    return [Estimator(item) for item in items]


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=positive_int, required=True, help="training set size")
    parser.add_argument("--p", type=positive_int, required=True, help="feature dimension")
    parser.add_argument("--lambda", dest="lam", type=positive_float, required=True, help="regularization strength")
    parser.add_argument("--tests", type=positive_int, default=100, help="number of test points m")
    parser.add_argument("--seed", type=nonnegative_int, default=0)
    parser.add_argument("--loss", choices=[kind.value for kind in LossKind], default=LossKind.LOGISTIC.value)
    parser.add_argument("--ridge-convention", choices=[c.value for c in RidgeConvention],
                        default=RidgeConvention.PAPER.value)


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=positive_int, default=None,
                        help="worker threads (default: $NEWFLUENCE_THREADS, then all cores)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value)


def build_parser() -> argparse.ArgumentParser:
    parser = _RaisingParser(
        prog="newfluence",
        description="Compare true, classical, corrected and one-step-Newton influence for regularized GLMs"
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    fit = subparsers.add_parser("fit", help="fit one synthetic instance and report df/p")
    _add_model_flags(fit)
    _add_run_flags(fit)
    fit.add_argument("--out", type=Path, required=True)

    influence = subparsers.add_parser("influence", help="write influence records for one instance")
    _add_model_flags(influence)
    _add_run_flags(influence)
    influence.add_argument("--estimators", type=estimator_list, default=[Estimator.IF, Estimator.CORRECTED_IF, Estimator.NEW])
    influence.add_argument("--records-out", type=Path, required=True)

    experiment = subparsers.add_parser("experiment", help="Kendall tau of every estimator against exact refits")
    _add_model_flags(experiment)
    _add_run_flags(experiment)
    experiment.add_argument("--estimators", type=estimator_list, default=list(Estimator))
    experiment.add_argument("--replicates", type=positive_int, default=1)
    experiment.add_argument("--out", type=Path, required=True)
    experiment.add_argument("--records-out", type=Path, default=None)

    tables = subparsers.add_parser("tables", help="reproduce a table preset row by row")
    tables.add_argument("--preset", choices=PRESET_NAMES, required=True)
    tables.add_argument("--max-n", type=positive_int, default=None, help="skip preset rows with larger n")
    tables.add_argument("--tests", type=positive_int, default=None)
    tables.add_argument("--seed", type=nonnegative_int, default=None)
    tables.add_argument("--replicates", type=positive_int, default=1)
    _add_run_flags(tables)
    tables.add_argument("--out", type=Path, required=True)

    return parser


def parse_args(argv: List[str]) -> CliInvocation:
    """Parse and validate argv (without the program name)"""
    if not argv:
        raise UsageError("newfluence: a subcommand is required (fit, influence, experiment, tables)")
    args = build_parser().parse_args(argv)
    subcommand = Subcommand(args.subcommand)

    config: Optional[ExperimentConfig] = None
    if subcommand != Subcommand.TABLES:
        config = ExperimentConfig(
            n=args.n,
            p=args.p,
            lam=args.lam,
            m=args.tests,
            seed=args.seed,
            loss=LossKind(args.loss),
            estimators=getattr(args, "estimators", list(Estimator)),
            ridge_convention=RidgeConvention(args.ridge_convention),
            replicates=getattr(args, "replicates", 1)
        )

    return CliInvocation(
        subcommand=subcommand,
        config=config,
        preset=getattr(args, "preset", None),
        max_n=getattr(args, "max_n", None),
        tests=args.tests if subcommand == Subcommand.TABLES else None,
        seed=args.seed if subcommand == Subcommand.TABLES else None,
        replicates=getattr(args, "replicates", None),
        threads=args.threads,
        out=getattr(args, "out", None),
        records_out=getattr(args, "records_out", None),
        format=OutputFormat(args.format)
    )
