from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> Check:
        chk = Check(name, bool(passed), detail)
        self.checks.append(chk)
        return chk

    def skip(self, name: str, detail: str = "") -> Check:
        chk = Check(name, True, detail, status="SKIPPED")
        self.checks.append(chk)
        return chk

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"title": self.title, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}
