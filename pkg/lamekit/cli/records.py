"""Versioned output record shared by every subcommand.

JSON output is the record itself; CSV output is the `results` table with the
column order fixed by `columns`. Floats are written with their shortest
round-trip representation, so re-parsing reproduces them bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator

SCHEMA_VERSION = "1"


def plain(value: Any) -> Any:
    """Convert numpy scalars and arrays (also nested in dicts and lists) into Python values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}j"
    return str(value)


class OutputRecord(BaseModel):
    """Payload written by one CLI invocation."""

    schema_version: Literal["1"] = SCHEMA_VERSION
    command: str
    params: dict[str, Any] = Field(default_factory=dict)
    columns: list[str] = Field(default_factory=list)
    results: list[dict[str, Any]] = Field(default_factory=list)
    diagnostics: dict[str, Any] = Field(default_factory=dict)

    @field_validator("params", "results", "diagnostics", mode="before")
    @classmethod
    def _to_plain(cls, value: Any) -> Any:
        return plain(value)

    def to_json(self) -> str:
        """Indented JSON with keys in insertion order."""
        return json.dumps(self.model_dump(), indent=2) + "\n"

    def to_csv(self) -> str:
        """The results table, header first."""
        columns = self.columns or (list(self.results[0]) if self.results else [])
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in self.results:
            writer.writerow([_cell(row.get(c)) for c in columns])
        return buffer.getvalue()

    def render(self, fmt: Literal["json", "csv"]) -> str:
        """Serialize in the requested format."""
        return self.to_csv() if fmt == "csv" else self.to_json()
