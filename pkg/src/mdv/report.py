"""Verification reports and their text / JSON renderings."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from . import __version__

PASS = "pass"
FAIL = "fail"
NOTED = "noted-discrepancy"
STATUSES = (PASS, FAIL, NOTED)


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    anchor: str
    witness: Optional[str] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        out["anchor"] = self.anchor
        return out


def check(name: str, ok: bool, anchor: str, witness: Optional[str] = None) -> Check:
    return Check(name, PASS if ok else FAIL, anchor, None if ok else witness)


def noted(name: str, anchor: str, witness: str) -> Check:
    return Check(name, NOTED, anchor, witness)


@dataclass
class VerificationReport:
    suite: str
    params: dict
    checks: List[Check] = field(default_factory=list)
    version: str = __version__
    elapsed_ms: int = 0

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def discrepancies(self) -> List[str]:
        return [f"{c.name}: {c.witness}" for c in self.checks if c.status == NOTED]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": dict(self.params),
            "checks": [c.to_json() for c in self.checks],
            "discrepancies": self.discrepancies,
            "version": self.version,
            "elapsed_ms": int(self.elapsed_ms),
        }

    def to_text(self) -> str:
        lines = [f"suite {self.suite}  " + " ".join(f"{k}={v}" for k, v in self.params.items())]
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            line = f"[{c.status.upper():>17}] {c.name.ljust(width)}  ({c.anchor})"
            if c.witness:
                line += f"\n{'':20}{c.witness}"
            lines.append(line)
        npass = sum(c.status == PASS for c in self.checks)
        lines.append(
            f"{len(self.checks)} checks: {npass} pass, {len(self.failures)} fail, "
            f"{len(self.discrepancies)} noted discrepancies -> {'PASS' if self.passed else 'FAIL'}"
        )
        if self.elapsed_ms:
            lines.append(f"elapsed {self.elapsed_ms} ms")
        return "\n".join(lines) + "\n"


def render(report: VerificationReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2) + "\n"
    if fmt == "text":
        return report.to_text()
    raise ValueError(f"unknown format {fmt!r}")


def emit(report: VerificationReport, fmt: str = "text", destination: Optional[str] = None) -> None:
    """Write the report to ``destination`` (a path) or stdout when None or "-"."""
    payload = render(report, fmt)
    if destination in (None, "-"):
        sys.stdout.write(payload)
        return
    with open(destination, "w", encoding="utf-8") as fh:
        fh.write(payload)
