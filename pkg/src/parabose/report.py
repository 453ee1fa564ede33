"""Check reports shared by the verification routines and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Maximum deviation per named identity, judged against a tolerance.

    Exact checks use ``tol = 0.0`` and report the largest absolute
    coefficient mismatch (``0.0`` when the identity holds exactly).
    """

    deviations: dict[str, float]
    tol: float
    details: list[str] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(d <= self.tol for d in self.deviations.values())

    def failures(self) -> list[str]:
        return [name for name, d in self.deviations.items() if not d <= self.tol]

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values(), default=0.0)


@dataclass
class CheckResult:
    """One line of a verification suite."""

    check: str
    anchor: str
    passed: bool
    max_deviation: float
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


class TruncationError(ValueError):
    """Raised when the truncated Fock space is too small for the request.

    ``required_dim`` carries the smallest basis size found adequate, when
    one could be determined.
    """

    def __init__(self, message: str, required_dim: int | None = None):
        super().__init__(message)
        self.required_dim = required_dim
