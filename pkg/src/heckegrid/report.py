"""Pass/fail reports shared by validation, identity and congruence checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = 1


def plain(value):
    """JSON-safe form: Fractions become ``"p/q"`` strings, tuples become lists."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return value


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    params: dict = field(default_factory=dict)
    first_mismatch: dict | None = None
    verified: int | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.params:
            out["params"] = plain(self.params)
        if self.verified is not None:
            out["verified"] = self.verified
        if self.first_mismatch is not None:
            out["first_mismatch"] = plain(self.first_mismatch)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"checks": [c.to_dict() for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))
