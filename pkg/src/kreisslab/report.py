"""Named inequality checks and their serializable report."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, str)) or value is None:
        return value
    if isinstance(value, complex):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, float):
        return value
    if hasattr(value, "item"):
        return _jsonable(value.item())
    if hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    return str(value)


@dataclass(frozen=True)
class CheckEntry:
    """One verified inequality: measured sides, worst margin, and its slack.

    ``worst_margin`` is the largest ratio left/right over everything the check
    sampled; the check passes exactly when the margin stays within the slack.
    """

    check: str
    inequality: str
    left: object
    right: object
    worst_margin: float
    slack: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        details = {"left": _jsonable(self.left), "right": _jsonable(self.right)}
        details.update(_jsonable(self.details))
        return {
            "check": self.check,
            "inequality": self.inequality,
            "worst_margin": _jsonable(float(self.worst_margin)),
            "slack": _jsonable(float(self.slack)),
            "pass": bool(self.passed),
            "details": details,
        }

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        margin = self.worst_margin
        margin_txt = "inf" if math.isinf(margin) else f"{margin:.6g}"
        return f"{status} {self.check}: worst_margin={margin_txt} slack={self.slack:.6g}"


@dataclass
class VerificationReport:
    entries: list[CheckEntry] = field(default_factory=list)

    def add(self, entry: CheckEntry) -> CheckEntry:
        self.entries.append(entry)
        return entry

    def extend(self, other: "VerificationReport") -> None:
        self.entries.extend(other.entries)

    @property
    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_json(self) -> str:
        return json.dumps([e.to_dict() for e in self.entries], indent=2)

    def write(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_json() + "\n")
        return path
