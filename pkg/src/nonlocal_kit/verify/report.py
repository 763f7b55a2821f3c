"""Report data model of the verification suites and its serialisations.

Numbers are written with 17 significant digits, so a report round-trips
every double exactly; non-finite values become the strings ``"inf"``,
``"-inf"`` and ``"nan"``.  Cases are kept sorted by id and no field depends on
the clock unless timing is requested, which makes reports byte-stable.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..special_functions import Params

__all__ = ["CaseResult", "SuiteReport", "POLICIES", "format_number"]

#: pass rules a case may use; the rule is echoed in the case description
POLICIES = {
    "abs": "abs_err <= tol",
    "rel": "rel_err <= tol",
    "either": "abs_err <= tol or rel_err <= tol",
    "le": "computed <= expected + tol",
    "lt": "computed < expected",
    "gt": "computed > expected",
    "raises": "the expected error is raised",
}


def format_number(x) -> str:
    """JSON text of a number with 17 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = "%.17g" % x
    return "0" if text == "-0" else text


def _csv_number(x) -> str:
    return format_number(x).strip('"')


def _errors(computed: float, expected: float) -> tuple[float, float]:
    if computed == expected:
        return 0.0, 0.0
    abs_err = abs(computed - expected)
    if math.isnan(abs_err):
        return math.nan, math.nan
    rel_err = abs_err / abs(expected) if expected != 0 else math.inf
    return abs_err, rel_err


@dataclass(frozen=True)
class CaseResult:
    id: str
    description: str
    computed: float
    expected: float
    abs_err: float
    rel_err: float
    tol: float
    passed: bool

    @classmethod
    def judge(cls, id: str, description: str, computed: float, expected: float,
              tol: float, policy: str = "either") -> "CaseResult":
        """Build a case and decide it under ``policy`` (see :data:`POLICIES`)."""
        if policy not in POLICIES or policy == "raises":
            raise ValueError(f"unknown comparison policy {policy!r}")
        computed, expected, tol = float(computed), float(expected), float(tol)
        abs_err, rel_err = _errors(computed, expected)
        if policy == "abs":
            ok = abs_err <= tol
        elif policy == "rel":
            ok = rel_err <= tol
        elif policy == "either":
            ok = abs_err <= tol or rel_err <= tol
        elif policy == "le":
            ok = computed <= expected + tol
        elif policy == "lt":
            ok = computed < expected
        else:
            ok = computed > expected
        return cls(id, f"{description} [pass if {POLICIES[policy]}]", computed, expected,
                   abs_err, rel_err, tol, bool(ok))

    @classmethod
    def expected_error(cls, id: str, description: str, raised: bool) -> "CaseResult":
        return cls(id, f"{description} [pass if {POLICIES['raises']}]", math.nan, math.nan,
                   math.nan, math.nan, 0.0, bool(raised))

    @classmethod
    def failure(cls, id: str, description: str, error: BaseException, expected: float,
                tol: float) -> "CaseResult":
        """A case whose computation raised; recorded as failed, not propagated."""
        kind = type(error).__name__
        return cls(id, f"{description} [failed: {kind}: {error}]", math.nan, float(expected),
                   math.nan, math.nan, float(tol), False)

    def to_json_text(self) -> str:
        parts = [
            f'"id": {json.dumps(self.id)}',
            f'"description": {json.dumps(self.description)}',
            f'"computed": {format_number(self.computed)}',
            f'"expected": {format_number(self.expected)}',
            f'"abs_err": {format_number(self.abs_err)}',
            f'"rel_err": {format_number(self.rel_err)}',
            f'"tol": {format_number(self.tol)}',
            f'"pass": {format_number(self.passed)}',
        ]
        return "{" + ", ".join(parts) + "}"


@dataclass
class SuiteReport:
    suite: str
    params: Params
    seed: int = 0
    cases: list = field(default_factory=list)
    wall_time_ms: int = 0

    def __post_init__(self):
        self.cases = sorted(self.cases, key=lambda c: c.id)
        ids = [c.id for c in self.cases]
        if len(set(ids)) != len(ids):
            raise ValueError("case ids within a report must be unique")

    @property
    def passed(self) -> bool:
        return bool(self.cases) and all(c.passed for c in self.cases)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def case(self, id: str) -> CaseResult:
        for c in self.cases:
            if c.id == id:
                return c
        raise KeyError(id)

    def to_json(self) -> str:
        p = self.params.as_dict()
        params = ", ".join(f'"{k}": {format_number(p[k])}' for k in ("n", "m", "alpha", "a", "p"))
        cases = ",\n    ".join(c.to_json_text() for c in self.cases)
        return (
            "{\n"
            f'  "suite": {json.dumps(self.suite)},\n'
            f'  "params": {{{params}}},\n'
            f'  "seed": {int(self.seed)},\n'
            f'  "pass": {format_number(self.passed)},\n'
            f'  "wall_time_ms": {int(self.wall_time_ms)},\n'
            f'  "cases": [\n    {cases}\n  ]\n'
            "}\n"
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "case_id", "computed", "expected", "abs_err", "rel_err",
                         "tol", "pass"])
        for c in self.cases:
            writer.writerow([self.suite, c.id, _csv_number(c.computed),
                             _csv_number(c.expected), _csv_number(c.abs_err),
                             _csv_number(c.rel_err), _csv_number(c.tol),
                             "true" if c.passed else "false"])
        return buf.getvalue()

    def render(self, fmt: str = "json") -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown report format {fmt!r}")

    def write(self, path, fmt: str = "json") -> Path:
        path = Path(path)
        path.write_text(self.render(fmt), encoding="utf-8")
        return path
