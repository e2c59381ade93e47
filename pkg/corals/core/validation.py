"""
Tropical Corals - Validation reports
"""

from dataclasses import dataclass, field
from typing import List, Type

from corals.core.errors import CoralError


@dataclass
class ValidationReport:
    """Violations found by a validator; an empty report means valid."""
    subject: str
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, violation: str) -> None:
        if violation not in self.violations:
            self.violations.append(violation)

    def extend(self, other: "ValidationReport") -> None:
        for v in other.violations:
            self.add(v)

    def has(self, fragment: str) -> bool:
        return any(fragment in v for v in self.violations)

    def require(self, error: Type[CoralError]) -> None:
        if self.violations:
            raise error(f"invalid {self.subject}: " + "; ".join(self.violations),
                        details=list(self.violations))

    def to_dict(self) -> dict:
        return {"subject": self.subject, "valid": self.ok, "violations": list(self.violations)}
