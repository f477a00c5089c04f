"""Readers for the artifact files the figure renderer consumes.

The quasispec CLI documents three CSV schemas (measures: position,weight;
traces: xi,re,im,abs; amplitudes: t,re,im,abs) and one fit JSON (epsilon,
intercept, stderr, window). Every reader here validates against those before
returning, and raises SchemaError naming the offending file and field, so a
batch run fails with a usable diagnostic instead of a plotting traceback.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MEASURE_HEADER = "position,weight"
TRACE_HEADER = "xi,re,im,abs"
AMPLITUDE_HEADER = "t,re,im,abs"

FIT_KEYS = ("epsilon", "intercept", "stderr", "window")


class SchemaError(ValueError):
    """An input artifact is missing, malformed, or misshapen."""


@dataclass(frozen=True)
class MeasureColumns:
    positions: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class SeriesColumns:
    """A sampled trace or amplitude: abscissa plus re/im/abs columns."""

    x: np.ndarray
    re: np.ndarray
    im: np.ndarray
    magnitude: np.ndarray


@dataclass(frozen=True)
class FitParams:
    epsilon: float
    intercept: float
    stderr: float
    window: tuple[float, float]


def _read_rows(path: Path, header: str) -> np.ndarray:
    if not path.is_file():
        raise SchemaError(f"{path}: input file does not exist")
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
        if first != header:
            raise SchemaError(f"{path}: expected header '{header}', found '{first}'")
        body = [line for line in fh if line.strip()]
    if not body:
        raise SchemaError(f"{path}: no data rows")
    try:
        rows = np.loadtxt(body, delimiter=",", ndmin=2)
    except ValueError as err:
        raise SchemaError(f"{path}: unparseable numeric row: {err}") from err
    n_cols = header.count(",") + 1
    if rows.shape[1] != n_cols:
        raise SchemaError(f"{path}: expected {n_cols} columns, found {rows.shape[1]}")
    if not np.all(np.isfinite(rows)):
        raise SchemaError(f"{path}: non-finite values")
    return rows


def read_measure(path) -> MeasureColumns:
    rows = _read_rows(Path(path), MEASURE_HEADER)
    if np.min(rows[:, 1]) < 0.0:
        raise SchemaError(f"{path}: negative value in 'weight' column")
    return MeasureColumns(rows[:, 0], rows[:, 1])


def read_trace(path) -> SeriesColumns:
    rows = _read_rows(Path(path), TRACE_HEADER)
    return SeriesColumns(rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3])


def read_amplitude(path) -> SeriesColumns:
    rows = _read_rows(Path(path), AMPLITUDE_HEADER)
    return SeriesColumns(rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3])


def read_fit(path) -> FitParams:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"{path}: input file does not exist")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: not valid JSON: {err}") from err
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: fit file must hold an object")
    for key in FIT_KEYS:
        if key not in raw:
            raise SchemaError(f"{path}: missing key '{key}'")
    try:
        window = (float(raw["window"][0]), float(raw["window"][1]))
        fit = FitParams(
            epsilon=float(raw["epsilon"]),
            intercept=float(raw["intercept"]),
            stderr=float(raw["stderr"]),
            window=window,
        )
    except (TypeError, ValueError, IndexError) as err:
        raise SchemaError(f"{path}: malformed fit values: {err}") from err
    if len(raw["window"]) != 2 or not (0.0 < window[0] < window[1]):
        raise SchemaError(f"{path}: window must be two increasing positive numbers")
    return fit
