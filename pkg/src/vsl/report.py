"""Named residual checks collected into a pass/fail report."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float
    note: str = ""

    @property
    def passed(self) -> bool:
        # NaN residuals never pass
        return bool(self.residual <= self.threshold)

    def to_dict(self):
        r = self.residual
        return {
            "name": self.name,
            "residual": r if math.isfinite(r) else str(r),
            "threshold": self.threshold,
            "pass": self.passed,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False, compare=False)

    def add(self, name: str, residual: float, threshold: float, note: str = "") -> Check:
        c = Check(name, float(residual), float(threshold), note)
        self.checks.append(c)
        return c

    def fail(self, name: str, note: str) -> Check:
        """Record a check that could not be evaluated (counts as a failure)."""
        return self.add(name, math.inf, 0.0, note)

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.residual, c.threshold, c.note))

    def finish(self) -> "VerificationReport":
        self.wall_time = time.perf_counter() - self._t0
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "suite": self.suite,
            "pass": self.passed,
            "wall_time": self.wall_time,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_text(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'} "
                 f"({sum(c.passed for c in self.checks)}/{len(self.checks)} checks, "
                 f"{self.wall_time:.2f} s)"]
        width = max((len(c.name) for c in self.checks), default=10)
        for c in self.checks:
            flag = "ok  " if c.passed else "FAIL"
            line = f"  {flag} {c.name:<{width}}  {c.residual:.3e} <= {c.threshold:.1e}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        return "\n".join(lines)
