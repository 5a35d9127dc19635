"""
Command-line invocation models
"""
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict

from src.models.experiment import ExperimentConfig


class Subcommand(str, Enum):
    FIT = "fit"
    INFLUENCE = "influence"
    EXPERIMENT = "experiment"
    TABLES = "tables"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class CliInvocation(BaseModel):
    """A validated command line; config is None only for the tables subcommand"""
    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    config: Optional[ExperimentConfig] = None
    preset: Optional[str] = None
    max_n: Optional[int] = None
    tests: Optional[int] = None
    seed: Optional[int] = None
    replicates: Optional[int] = None
    threads: Optional[int] = None
    out: Optional[Path] = None
    records_out: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV
