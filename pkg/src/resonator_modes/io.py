"""Deterministic CSV/JSON writers for run outputs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA_VERSION = "1.0"


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path: Path, header, columns) -> None:
    """Plain UTF-8 CSV, one header row, 17 significant digits per float."""
    columns = [np.ravel(np.asarray(c)) for c in columns]
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_matrix_csv(path: Path, row_labels, col_labels, matrix, names=("row", "col")) -> None:
    matrix = np.asarray(matrix, dtype=complex)
    rows, cols = np.meshgrid(row_labels, col_labels, indexing="ij")
    write_csv(path, [names[0], names[1], "re", "im"],
              [rows, cols, matrix.real, matrix.imag])


def jsonable(value):
    """Convert numpy scalars/arrays and non-finite floats into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {"re": jsonable(value.real), "im": jsonable(value.imag)}
    return value


def write_json(path: Path, payload) -> None:
    text = json.dumps(jsonable(payload), indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


@dataclass
class Check:
    """A value compared against a declared tolerance.

    ``kind="invariant"`` checks guard numerical correctness and make the run
    fail; ``kind="target"`` checks record figure-level thresholds.
    """

    name: str
    value: float
    tolerance: float
    comparison: str  # "<", "<=", ">=", ">"
    kind: str = "invariant"

    @property
    def passed(self) -> bool:
        v, t = self.value, self.tolerance
        if v is None or (isinstance(v, float) and math.isnan(v)):
            return False
        return {"<": v < t, "<=": v <= t, ">=": v >= t, ">": v > t}[self.comparison]

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "comparison": self.comparison, "kind": self.kind, "passed": self.passed}


@dataclass
class MetricsReport:
    command: str
    config: dict
    units: dict
    metrics: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    files: list = field(default_factory=list)

    @property
    def invariants_passed(self) -> bool:
        return all(c.passed for c in self.checks if c.kind == "invariant")

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "units": self.units,
            "metrics": self.metrics,
            "checks": [c.as_dict() for c in self.checks],
            "invariants_passed": self.invariants_passed,
            "files": sorted(self.files),
            "timings_file": "timings.json",
        }

    def write(self, out_dir: Path) -> None:
        """``metrics.json`` is deterministic; wall-clock times go to ``timings.json``."""
        out_dir = Path(out_dir)
        write_json(out_dir / "metrics.json", self.as_dict())
        write_json(out_dir / "timings.json", {"schema_version": SCHEMA_VERSION,
                                               "seconds": self.timings})
