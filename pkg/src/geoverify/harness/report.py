"""Verification reports and their JSON / text renderings.

Both renderings are byte-deterministic: fields appear in a fixed order and
every float is written with 17 significant digits.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .. import __version__

REPORT_FORMAT_VERSION = 1


@dataclass
class VerificationReport:
    fixture: str
    suite: str
    tolerance: float
    checks: list
    engine_version: str = __version__
    seed: int = None
    points: int = 0
    values: dict = field(default_factory=dict)
    format_version: int = REPORT_FORMAT_VERSION

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.overall else 1

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self):
        return [c for c in self.checks if not c.passed]


def _num(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def _json(value, indent, level=0) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _num(value)
    if isinstance(value, str):
        return _string(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{_string(str(k))}: {_json(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return "[]"
        items = [f"{pad}{_json(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _string(s: str) -> str:
    import json

    return json.dumps(s, ensure_ascii=False)


def check_record(c) -> dict:
    return {
        "name": c.name,
        "anchor": c.anchor,
        "hypothesis": c.hypothesis,
        "points": len(c.points),
        "max_residual": c.max_residual,
        "pass": c.passed,
        "verdict": c.verdict,
        "max_abs_residual": c.max_abs_residual,
        "tolerance": c.tolerance,
        "failing_points": list(c.failing_points),
    }


def report_dict(report: VerificationReport) -> dict:
    return {
        "format_version": report.format_version,
        "fixture": report.fixture,
        "suite": report.suite,
        "tolerance": report.tolerance,
        "checks": [check_record(c) for c in report.checks],
        "overall": report.overall,
        "engine_version": report.engine_version,
        "seed": report.seed,
        "points": report.points,
        "values": report.values,
    }


def to_json(report: VerificationReport) -> str:
    return _json(report_dict(report), 2) + "\n"


_COLORS = {"PASS": "32", "FAIL": "31", "HOLDS-ANYWAY": "36", "VACUOUS": "33", "INFO": "37"}


def _use_color(color):
    if color is not None:
        return color
    return os.environ.get("GEOVERIFY_COLOR", "").lower() in ("1", "yes", "true", "always")


def to_text(report: VerificationReport, color=None) -> str:
    color = _use_color(color)
    width = max([len(c.name) for c in report.checks] + [5])
    lines = [
        f"fixture: {report.fixture}  suite: {report.suite}  tolerance: {_num(report.tolerance)}  "
        f"points: {report.points}  seed: {report.seed}  engine: {report.engine_version}",
        f"{'check'.ljust(width)} {'verdict':<12} {'hyp':<6} {'points':>6}  {'max residual':<24} max |residual|",
    ]
    for c in report.checks:
        verdict = c.verdict
        shown = f"{verdict:<12}"
        if color:
            shown = f"\x1b[{_COLORS[verdict]}m{verdict}\x1b[0m" + " " * (12 - len(verdict))
        lines.append(
            f"{c.name.ljust(width)} {shown} {c.hypothesis:<6} {len(c.points):>6}  "
            f"{_num(c.max_residual):<24} {_num(c.max_abs_residual)}"
        )
    for key, value in report.values.items():
        lines.append(f"{key}: {_json(value, 0).replace(chr(10), ' ')}")
    lines.append(f"overall: {'PASS' if report.overall else 'FAIL'}")
    return "\n".join(lines) + "\n"


def emit_report(report: VerificationReport, fmt: str = "json", stream=None, color=None) -> int:
    """Write the report to ``stream`` (if given) and return the process exit code."""
    if fmt == "json":
        text = to_json(report)
    elif fmt == "text":
        text = to_text(report, color)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if stream is not None:
        stream.write(text)
    return report.exit_code
