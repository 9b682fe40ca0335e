"""Named check results shared by the verification entry points."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    witness: dict | None = None
    detail: str | None = None
    elapsed_ms: float = 0.0

    @classmethod
    def from_witness(cls, name: str, witness: dict | None, detail: str | None = None,
                     elapsed_ms: float = 0.0) -> "CheckResult":
        status = PASS if witness is None else FAIL
        return cls(name, status, witness, detail, elapsed_ms)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness,
                "detail": self.detail, "elapsed_ms": round(self.elapsed_ms, 3)}


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @classmethod
    def single(cls, check: CheckResult) -> "VerificationReport":
        return cls([check])

    @property
    def passed(self) -> bool:
        return not any(c.status == FAIL for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"overall": PASS if self.passed else FAIL,
                "checks": [c.to_dict() for c in self.checks]}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)
