"""
Table preset loading utilities
"""
import json
from pathlib import Path
from typing import Dict, Optional

from src.config.settings import PRESETS_DIR
from src.models.experiment import TablePreset

PRESETS_FILE = "paper_tables.json"


def load_presets(presets_dir: Optional[Path] = None) -> Dict[str, TablePreset]:
    """Load every table preset with hard failure on error"""
    preset_path = Path(presets_dir or PRESETS_DIR) / PRESETS_FILE
    try:
        with open(preset_path, "r", encoding="utf-8") as f:
            content = json.load(f)
    except FileNotFoundError:
        raise FileNotFoundError(f"Preset file not found: {preset_path}. No fallback available.")
    except json.JSONDecodeError as e:
        raise ValueError(f"Preset file '{preset_path}' is not valid JSON: {e}. No fallback available.")

    if not content:
        raise ValueError(f"Preset file '{preset_path}' is empty. No fallback available.")
    return {name: TablePreset(name=name, **fields) for name, fields in content.items()}


def load_preset(name: str, presets_dir: Optional[Path] = None) -> TablePreset:
    presets = load_presets(presets_dir)
    if name not in presets:
        raise ValueError(f"Unknown preset '{name}'. Available presets: {sorted(presets)}")
    return presets[name]
