"""Flat-file serialisation: versioned CSV, JSON reports, angle parsing."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

from .errors import ValidationError

CSV_MAGIC = "# rfsq-csv v1"

_ANGLE_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(pi)?\s*$")


def parse_angle(text: str) -> float:
    """Parse an angle given in radians or as a multiple of pi.

    Accepts plain floats ('0.785'), 'pi', and scaled forms like '0.5pi'
    or '-2pi'.
    """
    match = _ANGLE_RE.match(str(text))
    if not match or (match.group(1) is None and match.group(2) is None):
        raise ValidationError(f"cannot parse angle {text!r}")
    value = float(match.group(1)) if match.group(1) is not None else 1.0
    if match.group(2):
        value *= math.pi
    return value


def format_float(value: float) -> str:
    """17 significant digits: exact round trip for 64-bit floats."""
    return format(float(value), ".17g")


def write_csv(path, columns: dict[str, np.ndarray]) -> Path:
    """Write named columns as a versioned CSV (header magic, names, rows)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    data = [np.asarray(columns[name], dtype=float).ravel() for name in names]
    length = len(data[0])
    if any(len(col) != length for col in data):
        raise ValidationError("all CSV columns must have equal length")
    with path.open("w", encoding="utf-8") as fh:
        fh.write(CSV_MAGIC + "\n")
        fh.write(",".join(names) + "\n")
        for row in zip(*data):
            fh.write(",".join(format_float(v) for v in row) + "\n")
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    """Read a versioned CSV back into named columns."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        magic = fh.readline().rstrip("\n")
        if magic != CSV_MAGIC:
            raise ValidationError(f"{path} is not a {CSV_MAGIC!r} file")
        names = fh.readline().rstrip("\n").split(",")
        rows = [line.split(",") for line in fh if line.strip()]
    data = np.array(rows, dtype=float) if rows else np.empty((0, len(names)))
    return {name: data[:, k] for k, name in enumerate(names)}


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)
