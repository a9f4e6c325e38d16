"""DensityReport: the serialized output of every experiment.

JSON layout (keys sorted, two-space indent, trailing newline)::

    {"experiment": str, "params": {...}, "observed": {...}, "predicted": {...},
     "bands": {...}, "status": "pass" | "fail" | "report-only" | "insufficient-data",
     "runtime_ms": int | null}

Per-point data for plotting lives in ``observed["rows"]`` (a list of flat
dicts); the CSV export writes exactly those rows.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

STATUSES = ("pass", "fail", "report-only", "insufficient-data")
FIELDS = ("experiment", "params", "observed", "predicted", "bands", "status", "runtime_ms")


class ReportFormatError(ValueError):
    pass


@dataclass
class DensityReport:
    experiment: str
    params: dict = field(default_factory=dict)
    observed: dict = field(default_factory=dict)
    predicted: dict = field(default_factory=dict)
    bands: dict = field(default_factory=dict)
    status: str = "report-only"
    runtime_ms: int | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ReportFormatError(f"unknown status {self.status!r}")

    @property
    def rows(self) -> list[dict]:
        return self.observed.get("rows", [])

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DensityReport":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ReportFormatError(str(exc)) from None
        if not isinstance(data, dict) or set(data) != set(FIELDS):
            raise ReportFormatError(f"expected top-level fields {FIELDS}")
        for key in ("params", "observed", "predicted", "bands"):
            if not isinstance(data[key], dict):
                raise ReportFormatError(f"{key} must be an object")
        return cls(**data)

    def to_csv(self) -> str:
        rows = self.rows or [_flat_row(self)]
        columns: list[str] = []
        for row in rows:
            columns.extend(c for c in row if c not in columns)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: _cell(row.get(c)) for c in columns})
        return buf.getvalue()


def _flat_row(report: DensityReport) -> dict:
    row = {}
    for prefix, block in (("param", report.params), ("observed", report.observed), ("predicted", report.predicted)):
        for key, value in block.items():
            if not isinstance(value, (dict, list)):
                row[f"{prefix}_{key}"] = value
    return row


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def finite(value: float) -> float | None:
    """JSON forbids NaN/inf; map them to null."""
    return value if value is not None and math.isfinite(value) else None


def validate_report(text: str) -> DensityReport:
    """Parse ``text`` and check it re-serializes to the same bytes."""
    report = DensityReport.from_json(text)
    if report.to_json() != text:
        raise ReportFormatError("report does not round-trip byte-identically")
    return report
