"""Pass/fail reports for symbolic identity checks."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class IdentityResult:
    name: str
    status: str  # "pass" | "fail"
    residual: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class VerificationReport:
    title: str
    results: list[IdentityResult] = field(default_factory=list)

    def check(self, name: str, lhs, rhs) -> IdentityResult:
        """Record whether ``lhs - rhs`` canonicalizes to zero."""
        diff = lhs - rhs
        ok = diff.is_zero()
        result = IdentityResult(name, "pass" if ok else "fail", "" if ok else str(diff))
        self.results.append(result)
        return result

    def record(self, name: str, ok: bool, residual: str = "") -> IdentityResult:
        result = IdentityResult(name, "pass" if ok else "fail", "" if ok else residual)
        self.results.append(result)
        return result

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for r in other.results:
            self.results.append(IdentityResult(prefix + r.name, r.status, r.residual))

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "status": "pass" if self.passed else "fail",
            "identities": [asdict(r) for r in self.results],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def summary(self) -> str:
        n_fail = len(self.failures)
        return f"{self.title}: {len(self.results) - n_fail}/{len(self.results)} identities pass"
