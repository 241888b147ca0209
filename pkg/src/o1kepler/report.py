"""Verification reports: named checks with expected/actual values and tolerances."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def _plain(value):
    """Convert numpy / Fraction values into JSON-friendly Python objects."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class Case:
    name: str
    params: dict
    expected: Any
    actual: Any
    max_abs_dev: float
    tol: float
    rel_err: float | None = None
    passed: bool = False

    def to_dict(self):
        return {
            "name": self.name,
            "params": _plain(self.params),
            "expected": _plain(self.expected),
            "actual": _plain(self.actual),
            "max_abs_dev": _plain(self.max_abs_dev),
            "rel_err": _plain(self.rel_err),
            "tol": _plain(self.tol),
            "pass": bool(self.passed),
        }


@dataclass
class VerificationReport:
    suite: str
    cases: list[Case] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    wall_time_ms: float = 0.0
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def check(self, name, expected, actual, tol, relative=False, **params) -> Case:
        """Record a numeric comparison; passes when the (relative) deviation is <= tol."""
        e = np.asarray(expected, dtype=float)
        a = np.asarray(actual, dtype=float)
        dev = float(np.max(np.abs(a - e))) if e.size else 0.0
        scale = float(np.max(np.abs(e))) if e.size else 0.0
        rel = dev / scale if scale > 0 else None
        measure = rel if (relative and rel is not None) else dev
        case = Case(name, params, expected, actual, dev, tol, rel, bool(measure <= tol))
        self.cases.append(case)
        return case

    def check_deviation(self, name, deviation, tol, expected="0", actual=None, **params) -> Case:
        """Record a check already reduced to a non-negative deviation."""
        deviation = float(deviation)
        case = Case(
            name, params, expected, deviation if actual is None else actual,
            deviation, tol, None, bool(deviation <= tol),
        )
        self.cases.append(case)
        return case

    def check_equal(self, name, expected, actual, **params) -> Case:
        ok = expected == actual
        case = Case(name, params, expected, actual, 0.0 if ok else 1.0, 0.0, None, ok)
        self.cases.append(case)
        return case

    def extend(self, other: "VerificationReport", prefix=""):
        for c in other.cases:
            c.name = prefix + c.name
            self.cases.append(c)
        self.notes.extend(other.notes)

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.cases)

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.passed]

    def finish(self) -> "VerificationReport":
        self.wall_time_ms = (time.perf_counter() - self._started) * 1e3
        return self

    def to_dict(self, timing=False):
        summary = {"passed": self.passed, "failed": self.failed}
        if timing:
            summary["wall_time_ms"] = round(self.wall_time_ms, 3)
        out = {"schema": SCHEMA_VERSION, "suite": self.suite}
        if self.notes:
            out["notes"] = list(self.notes)
        out["cases"] = [c.to_dict() for c in self.cases]
        out["summary"] = summary
        return out

    def to_json(self, timing=False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=False) + "\n"

    def __str__(self):
        lines = [f"[{self.suite}] {self.passed} passed, {self.failed} failed"]
        for c in self.failures():
            lines.append(f"  FAIL {c.name} {c.params}: dev={c.max_abs_dev:.3e} tol={c.tol:.1e}")
        return "\n".join(lines)


def combine(suite: str, reports: list[VerificationReport]) -> dict:
    """Bundle several suite reports into one JSON-ready document."""
    return {
        "schema": SCHEMA_VERSION,
        "suite": suite,
        "suites": [r.to_dict() for r in reports],
        "summary": {
            "passed": sum(r.passed for r in reports),
            "failed": sum(r.failed for r in reports),
        },
    }
