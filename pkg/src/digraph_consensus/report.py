"""Pass/fail reports shared by the audit routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    value: float | None = None
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "value": self.value, "detail": self.detail}


@dataclass
class Report:
    """Ordered collection of named checks."""

    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, value: float | None = None, detail: str = "") -> Check:
        c = Check(name, bool(passed), None if value is None else float(value), detail)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            **({"data": self.data} if self.data else {}),
        }

    def __str__(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            val = "" if c.value is None else f" ({c.value:.3g})"
            lines.append(f"  [{'ok' if c.passed else 'XX'}] {c.name}{val} {c.detail}".rstrip())
        return "\n".join(lines)
