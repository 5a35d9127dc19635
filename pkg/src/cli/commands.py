"""
Subcommand dispatch and the process-level error boundary
"""
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from src.config.settings import resolve_thread_count
from src.errors import UsageError
from src.models.cli import CliInvocation, Subcommand
from src.services.experiment import compute_records, fit_synthetic, run_experiment, run_table
from src.services.preset_loader import load_preset
from src.services.results_writer import write_fit_summary, write_results
from src.services.run_callbacks import LoggingCallbackHandler
from src.cli.parser import parse_args

logger = logging.getLogger(__name__)


def run(invocation: CliInvocation) -> None:
    """Execute a validated invocation and write its outputs"""
    threads = resolve_thread_count(invocation.threads)
    callbacks = LoggingCallbackHandler(label=invocation.subcommand.value)

    if invocation.subcommand == Subcommand.FIT:
        summary = fit_synthetic(invocation.config, callbacks=callbacks)
        write_fit_summary(summary, invocation.out, invocation.format)

    elif invocation.subcommand == Subcommand.INFLUENCE:
        _, records = compute_records(invocation.config, n_jobs=threads, callbacks=callbacks)
        write_results([], records, invocation.format, records_path=invocation.records_out)

    elif invocation.subcommand == Subcommand.EXPERIMENT:
        result = run_experiment(invocation.config, n_jobs=threads, callbacks=callbacks)
        write_results(result.rows, result.records, invocation.format,
                      tables_path=invocation.out, records_path=invocation.records_out)

    else:
        preset = load_preset(invocation.preset)
        rows = run_table(
            preset,
            n_jobs=threads,
            max_n=invocation.max_n,
            tests=invocation.tests,
            seed=invocation.seed,
            replicates=invocation.replicates or 1,
            callbacks=callbacks
        )
        write_results(rows, [], invocation.format, tables_path=invocation.out)

    if callbacks.refit_count:
        logger.info(f"ℹ️ {callbacks.refit_count} refits, {callbacks.mean_refit_iterations:.2f} Newton iterations on average")


def _report_error(error: Exception) -> None:
    error_data = {
        "error_type": type(error).__name__,
        "error_message": " ".join(str(error).split())
    }
    flag = getattr(error, "flag", None)
    if flag:
        error_data["flag"] = flag
    path = getattr(error, "path", None)
    if path:
        error_data["path"] = str(path)
    print(json.dumps(error_data), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI; returns the process exit status"""
    argv = sys.argv[1:] if argv is None else argv
    try:
        invocation = parse_args(argv)
    except UsageError as e:
        _report_error(e)
        return 2
    except ValidationError as e:
        _report_error(UsageError(str(e)))
        return 2

    try:
        run(invocation)
    except Exception as e:
        logger.error(f"❌ {invocation.subcommand.value} failed: {type(e).__name__}: {e}")
        _report_error(e)
        return 1
    return 0
