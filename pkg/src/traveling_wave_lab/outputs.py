# src/traveling_wave_lab/outputs.py

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from enum import Enum
from functools import cache
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import jsonschema
import numpy as np
import pandas as pd

from . import config
from .errors import TravelingWaveError

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


class SchemaError(TravelingWaveError):
    """Report that does not match its published schema (a bug, exit 1)."""


# ---------- helpers ----------


def output_dir(path: str | Path | None = None) -> Path:
    """Target directory (created on demand), default ``config.OUTPUT_DIR``."""
    target = Path(path) if path is not None else config.OUTPUT_DIR
    target.mkdir(parents=True, exist_ok=True)
    return target


def _atomic(path: Path, write: Callable[[Path], None]) -> Path:
    """Write to a temporary file next to ``path`` and rename it into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    os.close(fd)
    try:
        write(Path(tmp))
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)
    return path


def to_jsonable(obj: Any) -> Any:
    """Plain JSON types: numpy scalars unwrapped, tuples as lists, NaN/inf as null."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, complex):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(report: dict[str, Any]) -> str:
    """Sorted keys, shortest round-trip floats, trailing newline."""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


# ---------- schemas ----------


@cache
def load_schema(name: str) -> dict[str, Any]:
    text = resources.files("traveling_wave_lab").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def validate(report: dict[str, Any], schema: str) -> dict[str, Any]:
    payload = to_jsonable(report)
    try:
        jsonschema.validate(payload, load_schema(schema))
    except jsonschema.ValidationError as e:
        raise SchemaError(f"report does not match schema {schema}: {e.message}", schema=schema) from e
    return payload


# ---------- writers ----------


def write_json(report: dict[str, Any], path: str | Path, schema: str | None = None) -> Path:
    """Validate (when a schema is named) and write atomically."""
    if schema is not None:
        validate(report, schema)
    text = dumps(report)
    path = _atomic(Path(path), lambda tmp: tmp.write_text(text, encoding="utf-8"))
    logger.info("JSON written to %s", path)
    return path


def write_csv(df: pd.DataFrame, path: str | Path) -> Path:
    """17 significant digits, no index, column order as given."""
    path = _atomic(
        Path(path),
        lambda tmp: df.to_csv(tmp, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"),
    )
    logger.info("CSV written to %s (%d rows)", path, len(df))
    return path


def write_svg(fig, path: str | Path) -> Path:
    """Deterministic SVG (no date, fixed hash salt); the figure is closed afterwards."""
    from .plotting import save

    return _atomic(Path(path), lambda tmp: save(fig, tmp))
