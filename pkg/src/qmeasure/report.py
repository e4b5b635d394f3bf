from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of a verification routine.

    Failures are reported here, never raised. ``witness`` holds the first
    counterexample in the enumeration order of the check that produced it.
    """

    name: str
    passed: bool
    witness: Any = None
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        s = f"{self.name}: {status}"
        if self.witness is not None:
            s += f" witness={self.witness}"
        return s

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "witness": self.witness,
            "details": self.details,
            "notes": list(self.notes),
        }
