"""Report returned by every CLI command"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List

from constants import EXIT_CHECK_FAILED, EXIT_OK


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_json(self) -> Dict[str, Any]:
        entry = {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.detail:
            entry["detail"] = self.detail
        return entry


def check(name: str, residual: float, tolerance: float, detail: str = "") -> CheckResult:
    """Pass when residual <= tolerance."""
    residual = float(residual)
    return CheckResult(name, residual, float(tolerance), residual <= tolerance, detail)


@dataclass
class Report:
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(1 for item in self.checks if not item.passed)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.failures == 0 else EXIT_CHECK_FAILED

    def to_json(self) -> Dict[str, Any]:
        data = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
        }
        if self.checks:
            data["checks"] = [item.to_json() for item in sorted(self.checks, key=lambda c: c.name)]
        data["failures"] = self.failures
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)

    def render_text(self) -> str:
        lines = [f"{self.command}", f"{'=' * 50}"]
        for key, value in self.inputs.items():
            lines.append(f"  {key}: {_plain(value)}")
        if self.results:
            lines.append(f"{'-' * 50}")
            for key, value in self.results.items():
                lines.append(f"  {key}: {_plain(value)}")
        if self.checks:
            lines.append(f"{'-' * 50}")
            for item in sorted(self.checks, key=lambda c: c.name):
                mark = "✓" if item.passed else "✗"
                lines.append(f"  {mark} {item.name}: {item.residual:.3e} (tol {item.tolerance:.1e})")
        lines.append(f"{'=' * 50}")
        lines.append(f"Failures: {self.failures}")
        return "\n".join(lines)


def _plain(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return str(value)
