"""Readers for the tidy results CSV and the problem-instance JSON.

The results CSV is the harness output format: an optional ``# config:``
comment line holding the experiment configuration as JSON, then a header
with the eleven tidy columns, then one row per measurement.  The
instance JSON is the harness's problem-instance dump, which for the
point-cloud task carries the propagated model snapshots in its metadata.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

RESULT_COLUMNS = (
    "experiment", "seed", "n", "p", "epsilon", "method", "agent_id",
    "x_axis_name", "x_value", "metric", "value",
)

CONFIG_PREFIX = "# config: "

INSTANCE_KEYS = ("n", "p", "auxiliary_points", "solitary_models",
                 "target_models", "metadata")
INSTANCE_METADATA_KEYS = ("mp_confidence_models", "mp_uniform_models")


class SchemaError(ValueError):
    """An input file does not match the documented layout."""


class EmptyInputError(ValueError):
    """An input file contains no data rows."""


class ParameterError(ValueError):
    """A rendering request is malformed."""


@dataclass
class ResultTable:
    """One parsed results CSV: its config echo and typed rows."""

    path: str
    config: dict
    rows: list

    @property
    def experiment(self) -> str:
        return self.rows[0]["experiment"]


def _typed(raw: dict, path: str) -> dict:
    row = dict(raw)
    try:
        row["seed"] = int(raw["seed"])
        row["n"] = int(raw["n"])
        row["p"] = int(raw["p"])
        row["epsilon"] = None if raw["epsilon"] == "" else float(raw["epsilon"])
        row["x_value"] = float(raw["x_value"])
        row["value"] = float(raw["value"])
    except (TypeError, ValueError):
        raise SchemaError(
            f"{path}: malformed numeric field in row {raw!r}") from None
    return row


def read_results_csv(path: str) -> ResultTable:
    """Parse one harness CSV, validating the column set."""
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()

    config: dict = {}
    if lines and lines[0].startswith(CONFIG_PREFIX):
        try:
            config = json.loads(lines[0][len(CONFIG_PREFIX):])
        except json.JSONDecodeError:
            raise SchemaError(f"{path}: unreadable config comment line")
        lines = lines[1:]

    if not lines or not lines[0].strip():
        raise EmptyInputError(f"{path}: no header row")

    reader = csv.DictReader(lines)
    fieldnames = reader.fieldnames or []
    missing = [c for c in RESULT_COLUMNS if c not in fieldnames]
    if missing:
        raise SchemaError(
            f"{path}: missing required column(s): {', '.join(missing)}")

    rows = [_typed(raw, path) for raw in reader]
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    return ResultTable(path=path, config=config, rows=rows)


def read_instance_json(path: str) -> dict:
    """Parse a problem-instance dump, validating the keys the point-cloud
    figure needs (including the propagated model snapshots)."""
    with open(path) as fh:
        text = fh.read()
    if not text.strip():
        raise EmptyInputError(f"{path}: empty file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected a JSON object")

    missing = [k for k in INSTANCE_KEYS if doc.get(k) is None]
    if missing:
        raise SchemaError(
            f"{path}: missing required key(s): {', '.join(missing)}")
    meta = doc["metadata"]
    missing_meta = [k for k in INSTANCE_METADATA_KEYS if k not in meta]
    if missing_meta:
        raise SchemaError(
            f"{path}: metadata missing key(s): {', '.join(missing_meta)} "
            f"(expected an instance dump that includes propagated models)")
    return doc
