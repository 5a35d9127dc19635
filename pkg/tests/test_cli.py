import json

import pytest

from src.cli import main, parse_args
from src.config.settings import THREADS_ENV_VAR, resolve_thread_count
from src.errors import UsageError
from src.models import Estimator, LossKind, OutputFormat, RidgeConvention, Subcommand
from src.services.preset_loader import load_preset
from src.services.results_writer import FIT_COLUMNS, RECORD_COLUMNS, TABLE_COLUMNS, read_records, read_rows

SMALL = ["--n", "20", "--p", "10", "--lambda", "1", "--tests", "3", "--seed", "5"]


def _header(path) -> list:
    with open(path, encoding="utf-8") as f:
        return f.readline().strip().split(",")


# ============================================================================
# Parsing
# ============================================================================

def test_parse_experiment():
    invocation = parse_args(["experiment", *SMALL, "--replicates", "2", "--out", "t.csv"])
    assert invocation.subcommand == Subcommand.EXPERIMENT
    config = invocation.config
    assert (config.n, config.p, config.lam, config.m, config.seed) == (20, 10, 1.0, 3, 5)
    assert config.loss == LossKind.LOGISTIC
    assert config.ridge_convention == RidgeConvention.PAPER
    assert config.estimators == frozenset(Estimator)
    assert config.replicates == 2
    assert str(invocation.out) == "t.csv" and invocation.records_out is None
    assert invocation.format == OutputFormat.CSV


def test_parse_influence_defaults_skip_exact_refits():
    invocation = parse_args(["influence", *SMALL, "--records-out", "r.csv", "--loss", "squared"])
    assert Estimator.TRUE not in invocation.config.estimators
    assert invocation.config.loss == LossKind.SQUARED


def test_parse_estimator_list():
    invocation = parse_args(["experiment", *SMALL, "--estimators", "true, new", "--out", "t.csv"])
    assert invocation.config.estimators == frozenset({Estimator.TRUE, Estimator.NEW})


def test_parse_tables_preset():
    invocation = parse_args(["tables", "--preset", "paper-table-1", "--max-n", "250", "--out", "t.csv"])
    assert invocation.config is None
    assert invocation.max_n == 250 and invocation.tests is None and invocation.seed is None
    preset = load_preset(invocation.preset)
    assert preset.lam == 0.01
    assert preset.sizes == [(250, 500), (500, 1000), (1000, 2000)]


def test_negative_size_names_the_flag():
    with pytest.raises(UsageError) as excinfo:
        parse_args(["experiment", "--n", "-5", "--p", "10", "--lambda", "1", "--out", "t.csv"])
    assert excinfo.value.flag == "--n"


def test_non_positive_lambda_is_rejected():
    with pytest.raises(UsageError) as excinfo:
        parse_args(["fit", "--n", "5", "--p", "2", "--lambda", "0", "--out", "f.csv"])
    assert excinfo.value.flag == "--lambda"


def test_unknown_flag_is_rejected():
    with pytest.raises(UsageError) as excinfo:
        parse_args(["fit", "--n", "5", "--p", "2", "--lambda", "1", "--out", "f.csv", "--bogus"])
    assert excinfo.value.flag == "--bogus"


def test_missing_required_flag_is_rejected():
    with pytest.raises(UsageError) as excinfo:
        parse_args(["fit", "--n", "5", "--p", "2", "--out", "f.csv"])
    assert excinfo.value.flag == "--lambda"


def test_unknown_estimator_and_preset_are_rejected():
    with pytest.raises(UsageError):
        parse_args(["experiment", *SMALL, "--estimators", "true,magic", "--out", "t.csv"])
    with pytest.raises(UsageError):
        parse_args(["tables", "--preset", "paper-table-9", "--out", "t.csv"])


def test_missing_subcommand_is_rejected():
    with pytest.raises(UsageError):
        parse_args([])


def test_help_exits_cleanly():
    with pytest.raises(SystemExit) as excinfo:
        parse_args(["--help"])
    assert excinfo.value.code == 0


# ============================================================================
# Thread count resolution
# ============================================================================

def test_thread_count_precedence(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    assert resolve_thread_count(None) == 3
    assert resolve_thread_count(2) == 2
    monkeypatch.delenv(THREADS_ENV_VAR)
    assert resolve_thread_count(None) >= 1


def test_invalid_thread_env_is_rejected(monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "many")
    with pytest.raises(ValueError):
        resolve_thread_count(None)
    monkeypatch.setenv(THREADS_ENV_VAR, "0")
    with pytest.raises(ValueError):
        resolve_thread_count(None)


# ============================================================================
# End to end
# ============================================================================

def test_usage_error_exit_status_and_report(capsys):
    assert main(["experiment", "--n", "-5", "--p", "10", "--lambda", "1", "--out", "t.csv"]) == 2
    lines = capsys.readouterr().err.strip().splitlines()
    assert len(lines) == 1
    report = json.loads(lines[0])
    assert report["error_type"] == "UsageError"
    assert report["flag"] == "--n"


def test_experiment_writes_tables_and_records(tmp_path):
    tables, records = tmp_path / "tables.csv", tmp_path / "records.csv"
    status = main(["experiment", *SMALL, "--threads", "2", "--out", str(tables), "--records-out", str(records)])
    assert status == 0
    assert _header(tables) == TABLE_COLUMNS
    assert _header(records) == RECORD_COLUMNS

    rows = read_rows(tables)
    assert len(rows) == 1 and rows[0].n == 20
    parsed = read_records(records)
    assert len(parsed) == 60
    assert all(record.i_true is not None for record in parsed)


def test_experiment_output_is_reproducible(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["experiment", *SMALL, "--threads", "1", "--out", str(first)]) == 0
    assert main(["experiment", *SMALL, "--threads", "2", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_fit_writes_summary(tmp_path):
    out = tmp_path / "fit.json"
    assert main(["fit", *SMALL, "--format", "json", "--out", str(out)]) == 0
    with open(out, encoding="utf-8") as f:
        payload = json.load(f)
    assert list(payload[0]) == FIT_COLUMNS
    assert payload[0]["converged"] is True
    assert 0.0 < payload[0]["df_ratio"] < 1.0


def test_influence_leaves_true_column_empty(tmp_path):
    out = tmp_path / "records.csv"
    assert main(["influence", *SMALL, "--records-out", str(out)]) == 0
    parsed = read_records(out)
    assert len(parsed) == 60
    assert all(record.i_true is None for record in parsed)


def test_tables_respects_max_n(tmp_path):
    out = tmp_path / "tables.csv"
    assert main(["tables", "--preset", "paper-table-2", "--max-n", "100", "--out", str(out)]) == 0
    assert _header(out) == TABLE_COLUMNS
    assert read_rows(out) == []


def test_unwritable_output_exits_with_runtime_error(tmp_path, capsys):
    status = main(["fit", *SMALL, "--out", str(tmp_path)])
    assert status == 1
    report = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert report["error_type"] == "ResultsWriteError"
    assert report["path"] == str(tmp_path)
    assert [p.name for p in tmp_path.iterdir()] == []
