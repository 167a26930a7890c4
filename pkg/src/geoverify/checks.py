"""Residual records produced by the structure and soliton checks."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

NONE, MET, UNMET = "none", "met", "unmet"


def residual(diff, *terms):
    """Return (scaled, raw) residual of a difference tensor.

    raw is max |diff|; scaled divides it by 1 + the largest max-abs entry of
    the contributing terms, so tolerances mean the same on fixtures whose
    components grow like e^{2z}.
    """
    diff = np.asarray(diff, dtype=float)
    raw = float(np.max(np.abs(diff))) if diff.size else 0.0
    scale = 0.0
    for t in terms:
        t = np.asarray(t, dtype=float)
        if t.size:
            scale = max(scale, float(np.max(np.abs(t))))
    return raw / (1.0 + scale), raw


@dataclass(frozen=True)
class Check:
    """One named residual, possibly accumulated over several sample points.

    ``hypotheses`` holds one status per point: ``"none"`` for unconditional
    checks, ``"met"``/``"unmet"`` for conclusions of a theorem whose
    hypothesis was (not) verified at that point. Only points whose status is
    not ``"unmet"`` can fail the check.
    """

    name: str
    anchor: str
    tolerance: float
    residuals: tuple = ()
    abs_residuals: tuple = ()
    points: tuple = ()
    hypotheses: tuple = ()
    informational: bool = False

    @classmethod
    def single(cls, name, anchor, tol, scaled_raw, hypothesis=NONE, point=0, informational=False):
        scaled, raw = scaled_raw
        return cls(name, anchor, tol, (scaled,), (raw,), (point,), (hypothesis,), informational)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def max_abs_residual(self) -> float:
        return max(self.abs_residuals, default=0.0)

    def _holds(self, r):
        return bool(r <= self.tolerance)

    @property
    def failing_points(self):
        if self.informational:
            return ()
        return tuple(
            p
            for p, r, h in zip(self.points, self.residuals, self.hypotheses)
            if h != UNMET and not self._holds(r)
        )

    @property
    def passed(self) -> bool:
        return not self.failing_points

    @property
    def hypothesis(self) -> str:
        kinds = set(self.hypotheses)
        if not kinds:
            return NONE
        return kinds.pop() if len(kinds) == 1 else "mixed"

    @property
    def verdict(self) -> str:
        """PASS, FAIL, INFO, or for conclusions whose hypothesis never held,
        HOLDS-ANYWAY (residual within tolerance) or VACUOUS (it is not)."""
        if self.informational:
            return "INFO"
        if self.failing_points:
            return "FAIL"
        if self.hypotheses and all(h == UNMET for h in self.hypotheses):
            if all(self._holds(r) for r in self.residuals):
                return "HOLDS-ANYWAY"
            return "VACUOUS"
        return "PASS"

    def merged(self, other: Check) -> Check:
        return replace(
            self,
            residuals=self.residuals + other.residuals,
            abs_residuals=self.abs_residuals + other.abs_residuals,
            points=self.points + other.points,
            hypotheses=self.hypotheses + other.hypotheses,
        )

    def at_point(self, index: int) -> Check:
        return replace(self, points=tuple(index for _ in self.points))


@dataclass
class CheckReport:
    """The checks produced by one operation (one point, or merged over points)."""

    name: str
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    def add(self, check: Check):
        self.checks.append(check)
        return check

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name or c.name.endswith(": " + name):
                return c
        raise KeyError(name)

    def __iter__(self):
        return iter(self.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.max_residual for c in self.checks if not c.informational), default=0.0)


def merge(reports, name=None) -> CheckReport:
    """Concatenate per-point reports, keeping first-seen check order."""
    out = CheckReport(name or (reports[0].name if reports else ""))
    index = {}
    for rep in reports:
        for c in rep.checks:
            if c.name in index:
                out.checks[index[c.name]] = out.checks[index[c.name]].merged(c)
            else:
                index[c.name] = len(out.checks)
                out.checks.append(c)
    return out
