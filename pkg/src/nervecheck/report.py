"""Run reports emitted by the command-line tool.

Field order is fixed and nothing run-dependent (wall-clock times, worker
counts, absolute paths) is included unless timings are asked for, so two
runs on the same inputs print identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = ["Check", "RunReport", "EXIT_OK", "EXIT_FAILED", "EXIT_INPUT", "jsonable"]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

PASS, FAIL, SKIP = "pass", "fail", "n/a"


def jsonable(x: Any) -> Any:
    """Convert numpy scalars/arrays, tuples and sets to plain JSON values."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x)]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class Check:
    name: str
    verdict: str  # "pass", "fail" or "n/a"
    detail: str = ""
    source: str = ""  # the module operation behind the verdict

    def as_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "source": self.source, "detail": self.detail}


@dataclass
class RunReport:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)  # file -> sha256
    params: dict[str, Any] = field(default_factory=dict)
    results: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    counterexamples: list[Any] = field(default_factory=list)
    timings: dict[str, float] | None = None

    def check(self, name: str, ok: bool | None, detail: str = "", source: str = "") -> Check:
        verdict = SKIP if ok is None else (PASS if ok else FAIL)
        c = Check(name, verdict, detail, source)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.verdict != FAIL for c in self.checks)

    @property
    def verdict(self) -> str:
        return PASS if self.ok else FAIL

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.ok else EXIT_FAILED

    def as_dict(self) -> dict:
        out = {
            "command": self.command,
            "inputs": dict(self.inputs),
            "params": jsonable(self.params),
            "results": jsonable(self.results),
            "checks": [c.as_dict() for c in self.checks],
            "counterexamples": jsonable(self.counterexamples),
            "verdict": self.verdict,
        }
        if self.timings is not None:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        for name, h in self.inputs.items():
            lines.append(f"input {name} sha256={h}")
        for k, v in self.params.items():
            lines.append(f"param {k} = {_compact(v)}")
        for k, v in self.results.items():
            lines.append(f"result {k} = {_compact(v)}")
        for c in self.checks:
            extra = f" ({c.detail})" if c.detail else ""
            lines.append(f"check {c.name}: {c.verdict}{extra}")
        if self.counterexamples:
            lines.append(f"counterexamples: {len(self.counterexamples)}")
            for x in self.counterexamples[:10]:
                lines.append(f"  {_compact(x)}")
        if self.timings is not None:
            for k, v in self.timings.items():
                lines.append(f"timing {k} = {v:.6f}s")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def _compact(v: Any) -> str:
    return json.dumps(jsonable(v), separators=(",", ":"))
