"""
Results file writing and reading

Files are written to a temporary sibling and renamed into place, so a
failed run never leaves a partial file at the destination.
"""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from src.errors import ResultsWriteError
from src.models.cli import OutputFormat
from src.models.experiment import FitSummary, TableRow
from src.models.influence import InfluenceRecord

logger = logging.getLogger(__name__)

TABLE_COLUMNS = [
    "n", "p", "lambda", "df_ratio",
    "tau_new_mean", "tau_new_std", "tau_if_mean", "tau_if_std",
    "tau_corrected_mean", "tau_corrected_std"
]
RECORD_COLUMNS = ["train_index", "test_index", "h_ii", "i_true", "i_if", "i_if_corrected", "i_new"]
FIT_COLUMNS = ["n", "p", "lambda", "objective_value", "grad_norm", "iterations", "converged", "df", "df_ratio"]

FLOAT_FORMAT = "%.17g"


def _frame(rows: Sequence[dict], columns: List[str], integer_columns: Sequence[str]) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=columns)
    float_columns = [c for c in columns if c not in integer_columns and c != "converged"]
    frame[float_columns] = frame[float_columns].astype(float)
    return frame


def _atomic_write(path: Path, render) -> None:
    path = Path(path)
    tmp_name = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            "w", encoding="utf-8", newline="", dir=path.parent,
            prefix=f".{path.name}.", suffix=".tmp", delete=False
        ) as tmp:
            tmp_name = tmp.name
            render(tmp)
        os.replace(tmp_name, path)
    except OSError as e:
        if tmp_name and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise ResultsWriteError(f"Failed to write results to '{path}': {e}", path=str(path))


def _write_rows(
    rows: List[dict],
    columns: List[str],
    integer_columns: Sequence[str],
    path: Path,
    fmt: OutputFormat
) -> None:
    if fmt == OutputFormat.CSV:
        frame = _frame(rows, columns, integer_columns)
        _atomic_write(path, lambda f: frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, na_rep=""))
    else:
        payload = [{column: row[column] for column in columns} for row in rows]
        _atomic_write(path, lambda f: json.dump(payload, f, indent=2))
    logger.info(f"💾 Wrote {len(rows)} rows to {path}")


def write_results(
    rows: Sequence[TableRow],
    records: Sequence[InfluenceRecord],
    fmt: OutputFormat = OutputFormat.CSV,
    tables_path: Optional[Path] = None,
    records_path: Optional[Path] = None
) -> None:
    """Write the tau table and/or the raw influence records (train-major order)"""
    if tables_path is not None:
        table = [row.model_dump(by_alias=True) for row in rows]
        _write_rows(table, TABLE_COLUMNS, ("n", "p"), tables_path, fmt)
    if records_path is not None:
        dumped = [record.model_dump() for record in records]
        _write_rows(dumped, RECORD_COLUMNS, ("train_index", "test_index"), records_path, fmt)


def write_fit_summary(summary: FitSummary, path: Path, fmt: OutputFormat = OutputFormat.CSV) -> None:
    _write_rows([summary.model_dump(by_alias=True)], FIT_COLUMNS, ("n", "p", "iterations"), path, fmt)


def _native(value):
    if pd.isna(value):
        return None
    return value.item() if hasattr(value, "item") else value


def _read_csv(path: Path) -> List[dict]:
    frame = pd.read_csv(path, float_precision="round_trip")
    return [
        {key: _native(value) for key, value in row.items()}
        for row in frame.to_dict(orient="records")
    ]


def read_records(path: Path) -> List[InfluenceRecord]:
    """Parse a records CSV back into InfluenceRecords"""
    return [InfluenceRecord(**row) for row in _read_csv(path)]


def read_rows(path: Path) -> List[TableRow]:
    """Parse a tables CSV back into TableRows"""
    return [TableRow(**row) for row in _read_csv(path)]
