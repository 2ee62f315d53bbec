"""Artifact IO: result tables, trace dumps, score histograms and experiment config files.

Every number written to a result file carries 12 significant digits, and rows keep the order they
were produced in, so the same run always yields the same bytes. Write failures surface as
``OSError`` naming the path.
"""

from __future__ import annotations

import csv
import json
import math
import struct
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel

from .errors import ConfigError
from .models import (
    CurvePoint,
    ExperimentConfig,
    ExperimentResult,
    HistogramConfig,
    ReceiverParams,
    ScoreHistogram,
    TesResponseModel,
)

SIGNIFICANT_DIGITS = 12

# Column order of the result table.
RESULT_FIELDS = (
    "alpha_sq",
    "alpha_sq_rescaled",
    "beta_sq",
    "p_err",
    "p_err_stderr",
    "p_sql",
    "p_helstrom",
    "improvement_db",
    "trials",
    "seed",
)
BOUNDS_FIELDS = ("alpha_sq", "p_sql", "p_helstrom")
HISTOGRAM_FIELDS = ("bin_center", "count_plus", "count_minus")
CURVE_FIELDS = tuple(CurvePoint.model_fields)

# Trace dump: header (magic, samples per trace, dt, trace count), then float32 samples row-major.
TRACE_MAGIC = b"TESV"
_TRACE_HEADER = struct.Struct("<4sIdQ")

# Config-file keys routed to nested models.
_TES_PREFIX = "tes_"
_HISTOGRAM_PREFIX = "hist_"
_LIST_KEYS = {"alpha_sq_grid", "beta_grid", "dark_low_profile"}
_NESTED_FIELDS = {"params", "tes", "histogram"}
_PATH_KEYS = {"out", "histogram_dir"}


# --------------------------------------------------------------------------- #
# Number formatting
# --------------------------------------------------------------------------- #
def format_value(value: Any) -> str:
    """Text form of one table cell; None is an empty cell."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _rounded(value: Any) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_rounded(v) for v in value]
    return value


# --------------------------------------------------------------------------- #
# CSV / JSON primitives
# --------------------------------------------------------------------------- #
def write_rows(path: Path, fields: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> None:
    """Write a CSV table with a header row and ``\\n`` line endings."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(fields)
            for row in rows:
                writer.writerow([format_value(row.get(k)) for k in fields])
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def read_rows(path: Path) -> List[Dict[str, str]]:
    """Rows of a CSV table as header-keyed strings."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def read_json(path: Path):
    """Load raw JSON, or return None if the file is missing."""
    if not Path(path).exists():
        return None
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_json(path: Path, obj) -> None:
    """Write pretty JSON with a trailing newline."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(obj, f, indent=2, ensure_ascii=False)
            f.write("\n")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def emit_rows(
    path: Path, fields: Sequence[str], rows: Sequence[Mapping[str, Any]], format: str
) -> None:
    """Write plain rows as CSV or as a JSON array of records."""
    if format == "csv":
        write_rows(path, fields, rows)
    elif format == "json":
        write_json(path, [_rounded(dict(r)) for r in rows])
    else:
        raise ValueError(f"Unknown output format '{format}'. Choose from: csv, json")


def dump_models(path: Path, models: Sequence[BaseModel], fields: Sequence[str], format: str) -> None:
    """Write models as CSV (the given columns) or as a JSON array of full records."""
    if format == "json":
        write_json(path, [_rounded(m.model_dump(mode="json")) for m in models])
    else:
        emit_rows(path, fields, [m.model_dump() for m in models], format)


def emit_results(results: Sequence[ExperimentResult], format: str, path: Path) -> None:
    """Write experiment results in run order."""
    dump_models(path, results, RESULT_FIELDS, format)


# --------------------------------------------------------------------------- #
# Trace dump and score histograms
# --------------------------------------------------------------------------- #
def write_trace_dump(path: Path, samples: np.ndarray, dt: float) -> None:
    """Binary dump of a (count, L) trace array as little-endian float32."""
    samples = np.atleast_2d(np.asarray(samples, dtype="<f4"))
    count, length = samples.shape
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as f:
            f.write(_TRACE_HEADER.pack(TRACE_MAGIC, length, float(dt), count))
            f.write(samples.tobytes(order="C"))
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def read_trace_dump(path: Path) -> Tuple[np.ndarray, float]:
    """Traces and sample period from a dump written by ``write_trace_dump``."""
    raw = Path(path).read_bytes()
    if len(raw) < _TRACE_HEADER.size:
        raise ValueError(f"{path} is too short to be a trace dump")
    magic, length, dt, count = _TRACE_HEADER.unpack_from(raw)
    if magic != TRACE_MAGIC:
        raise ValueError(f"{path} is not a trace dump (magic {magic!r})")
    data = np.frombuffer(raw, dtype="<f4", offset=_TRACE_HEADER.size)
    if data.size != length * count:
        raise ValueError(f"{path} holds {data.size} samples, header says {length * count}")
    return data.reshape(count, length).astype(float), dt


def write_histogram_csv(path: Path, hist: ScoreHistogram) -> None:
    rows = (
        {"bin_center": c, "count_plus": int(p), "count_minus": int(m)}
        for c, p, m in zip(hist.centers, hist.counts_plus, hist.counts_minus)
    )
    write_rows(path, HISTOGRAM_FIELDS, rows)


# --------------------------------------------------------------------------- #
# Config files and list arguments
# --------------------------------------------------------------------------- #
def parse_float_list(text: str) -> List[float]:
    """``"0.5, 1,1.5"`` -> ``[0.5, 1.0, 1.5]``; empty items are a usage error."""
    items = [s.strip() for s in str(text).split(",")]
    if not items or any(not s for s in items):
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}")
    try:
        return [float(s) for s in items]
    except ValueError as e:
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}") from e


def parse_int_list(text: str) -> List[int]:
    values = parse_float_list(text)
    if any(v != int(v) for v in values):
        raise ValueError(f"expected a comma-separated list of integers, got {text!r}")
    return [int(v) for v in values]


def load_config(path: Path) -> ExperimentConfig:
    """Read a flat ``KEY=VALUE`` experiment file.

    Keys are ``ExperimentConfig`` field names, receiver field names (``visibility``,
    ``dark_high_rate``, ...), ``tes_``-prefixed detector fields and ``hist_``-prefixed
    histogram fields. Lists are comma-separated. Relative paths resolve against the file's
    directory. Unknown keys raise ``ConfigError``.
    """
    path = Path(path)
    if not path.is_file():
        raise OSError(f"config file not found: {path}")
    top: Dict[str, Any] = {}
    receiver: Dict[str, Any] = {}
    tes: Dict[str, Any] = {}
    histogram: Dict[str, Any] = {}
    for key, value in dotenv_values(path).items():
        key = key.strip().lower()
        if value is None or not value.strip():
            continue
        value = value.strip()
        if key in _LIST_KEYS:
            value = parse_float_list(value)
        if key in _PATH_KEYS:
            value = path.parent / value
        if key in ReceiverParams.model_fields:
            receiver[key] = value
        elif key.startswith(_TES_PREFIX) and key[len(_TES_PREFIX) :] in TesResponseModel.model_fields:
            tes[key[len(_TES_PREFIX) :]] = value
        elif (
            key.startswith(_HISTOGRAM_PREFIX)
            and key[len(_HISTOGRAM_PREFIX) :] in HistogramConfig.model_fields
        ):
            histogram[key[len(_HISTOGRAM_PREFIX) :]] = value
        elif key in ExperimentConfig.model_fields and key not in _NESTED_FIELDS:
            top[key] = value
        else:
            raise ConfigError(f"unknown key '{key}' in {path}")
    if "seed" not in top:
        raise ConfigError(f"{path} must set an explicit seed")
    if receiver:
        top["params"] = receiver
    if tes:
        top["tes"] = tes
    if histogram:
        top["histogram"] = histogram
    return ExperimentConfig.model_validate(top)
