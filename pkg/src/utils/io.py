"""Utility helpers for configuration and output.

Configuration is YAML; tabular output goes through pandas with 17
significant digits so values survive a write/read round trip; summaries
are JSON with snake_case keys.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import pandas as pd
import yaml

FLOAT_FORMAT = "%.17g"


def read_config(path: str) -> dict:
    """Load a YAML configuration file into a dictionary."""
    with open(path) as f:
        return yaml.safe_load(f) or {}


def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        # repr of a double is its shortest round-trip form (at most 17 digits)
        return float(f"{float(value):.17g}")
    return value


def write_json(path: str | Path, payload: Mapping[str, Any]) -> None:
    """Write a summary dictionary as indented JSON."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(_jsonable(payload), f, indent=2)
        f.write("\n")


def read_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def write_csv(path: str | Path, frame: pd.DataFrame) -> None:
    """Write a frame without its index using the full-precision float format."""
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
