"""Named residuals with pass/fail verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    passed: bool
    witness: Any = None
    # Non-blocking checks are reported but never fail the report.
    blocking: bool = True
    note: str = ""


@dataclass
class CheckReport:
    """Ordered collection of checks evaluated at a single tolerance."""

    tolerance: float = DEFAULT_TOL
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name, residual, witness=None, *, blocking=True, note=""):
        residual = float(residual)
        check = Check(
            name=name,
            residual=residual,
            passed=residual <= self.tolerance,
            witness=witness,
            blocking=blocking,
            note=note,
        )
        self.checks.append(check)
        return check

    def extend(self, other: CheckReport, prefix: str = ""):
        for c in other.checks:
            self.add(prefix + c.name, c.residual, c.witness, blocking=c.blocking, note=c.note)
        self.notes.extend(other.notes)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.blocking)

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name):
        return any(c.name == name for c in self.checks)

    def residual(self, name) -> float:
        return self[name].residual

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]
