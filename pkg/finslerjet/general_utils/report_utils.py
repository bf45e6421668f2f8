import csv
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Sequence

import numpy as np

from finslerjet.general_utils import constants


def _float(value: float) -> str:
    if not math.isfinite(value):
        return "null"
    text = format(value, f".{constants.FLOAT_DIGITS_JSON}g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def to_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """
    JSON text with every float written to 17 significant digits, so that
    identical payloads give identical bytes. Keys keep their insertion order.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, Enum):
        obj = obj.value
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, np.generic):
        obj = obj.item()
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {to_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.generic)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable!")


def format_number(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{constants.FLOAT_DIGITS_TABLE}g")
    return str(value)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Plain text table, numbers to 6 significant digits."""
    cells = [[format_number(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(row[i]) for row in cells]) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def write_residual_csv(path, reports) -> None:
    """One row per identity and sample: name, index, residual."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["identity", "sample", "residual"])
        for report in reports:
            for i, residual in enumerate(report.residuals):
                writer.writerow([report.name, i, format(residual, f".{constants.FLOAT_DIGITS_JSON}g")])


@dataclass
class RunReport:
    """Everything one CLI invocation produced; ``timing`` is kept apart from the numeric payload."""
    version: str
    command: str
    spec: dict
    sampler: Optional[dict] = None
    identities: list = field(default_factory=list)
    detection: list = field(default_factory=list)
    inspection: Optional[dict] = None
    jet_orders: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def payload(self) -> dict:
        return {
            "schema": constants.SCHEMA_VERSION,
            "version": self.version,
            "command": self.command,
            "spec": self.spec,
            "sampler": self.sampler,
            "jet_orders": self.jet_orders,
            "inspection": self.inspection,
            "identities": [r.as_dict() for r in self.identities],
            "detection": [v.as_dict() for v in self.detection],
        }

    def as_dict(self) -> dict:
        return {**self.payload(), "timing": self.timing}

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(to_json(self.as_dict()) + "\n")
