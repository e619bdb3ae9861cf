"""Uniform result record shared by all verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass
class CheckResult:
    name: str
    status: str = PASS
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict[str, Any]:
        out = {"name": self.name, "status": self.status, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def fail(name: str, checked: int = 0, **witness) -> CheckResult:
    return CheckResult(name, FAIL, witness=witness, checked=checked)


def combine(name: str, results) -> CheckResult:
    """Aggregate sub-checks: fails if any fails, n/a only if all are."""
    results = list(results)
    out = CheckResult(name, checked=sum(r.checked for r in results))
    out.details = {"parts": [r.to_dict() for r in results]}
    if any(r.status == FAIL for r in results):
        out.status = FAIL
        out.witness = next(r.witness for r in results if r.status == FAIL)
    elif results and all(r.status == NOT_APPLICABLE for r in results):
        out.status = NOT_APPLICABLE
    return out
