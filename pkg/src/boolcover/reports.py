"""Shared validation-report types and the toolkit's exception hierarchy.

Every validator in the package returns a ValidationReport: a list of named
checks with PASS/FAIL status and a witness tuple on failure, preceded by any
structural problems that made the semantic checks impossible to run.
Reports render to deterministic machine-readable lines so they can be
diffed against golden files.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class ToolkitError(Exception):
    """Base class for all errors raised by the package."""


class ParseError(ToolkitError):
    """A text input does not conform to its file format."""


class StructuralError(ToolkitError):
    """An object is malformed before any semantic checking applies."""


class ConstructionError(ToolkitError):
    """A constructor's requirements are not met by the given pieces."""


class NotAnArrow(ToolkitError):
    """A composite that should be a structure map fails validation."""

    def __init__(self, message: str, report: "ValidationReport | None" = None):
        super().__init__(message)
        self.report = report


class NotInvertible(ToolkitError):
    """A pasting map was requested for a non-injective cover."""


class IllFormedSubfunctor(ToolkitError):
    """Counit evaluation is representative-dependent on some class."""


class BudgetExceeded(ToolkitError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(
            f"{what}: {needed} candidates exceed enumeration budget {budget}"
        )
        self.needed = needed
        self.budget = budget


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check, with a witness tuple when it fails."""

    name: str
    passed: bool
    witness: tuple[str, ...] = ()

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.witness:
            return f"{status} {self.name} " + " ".join(self.witness)
        return f"{status} {self.name}"


@dataclass(frozen=True)
class ValidationReport:
    subject: str
    structural: tuple[str, ...] = ()
    checks: tuple[CheckResult, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.structural and all(c.passed for c in self.checks)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        out = [f"ERROR {self.subject} {msg}" for msg in self.structural]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            tail = (" " + " ".join(c.witness)) if c.witness else ""
            out.append(f"{status} {self.subject}.{c.name}{tail}")
        return out


def report_lines(reports: list[ValidationReport]) -> list[str]:
    out: list[str] = []
    for r in reports:
        out.extend(r.lines())
    return out
