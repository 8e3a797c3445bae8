"""VerificationReport and the margin conventions shared by all verifiers.

Every inequality is stored as ``lhs <sense> rhs`` with ``sense`` one of
``"<="`` or ``">="`` exactly as stated in the source result.  The signed
margin is normalised so that a non-negative margin always means "the
inequality holds":

    margin = (rhs - lhs) / max(|lhs|, |rhs|)   for "<="
    margin = (lhs - rhs) / max(|lhs|, |rhs|)   for ">="
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

EQUALITY_TOLERANCE = 5e-4
DEFAULT_TOLERANCE = 1e-6

STATUSES = ("pass", "fail", "hypothesis-failure", "not-applicable", "vacuous", "error")


def normalized_margin(lhs: float, rhs: float, sense: str) -> float:
    """Signed, scale-free margin; positive when the inequality holds strictly."""
    if sense not in ("<=", ">="):
        raise ValueError(f"unknown sense {sense!r}")
    small, big = (lhs, rhs) if sense == "<=" else (rhs, lhs)
    if math.isnan(small) or math.isnan(big):
        return math.nan
    if math.isinf(big) or math.isinf(small):
        if small == big:
            return 0.0
        return 1.0 if big > small else -1.0
    scale = max(abs(lhs), abs(rhs))
    if scale == 0.0:
        return 0.0
    return (big - small) / scale


@dataclass
class Check:
    """One scalar inequality inside a report."""

    name: str
    lhs: float
    rhs: float
    sense: str
    margin: float = math.nan
    x: float | None = None
    equality: bool = False

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        self.margin = normalized_margin(self.lhs, self.rhs, self.sense)


@dataclass
class Hypothesis:
    """A sampled hypothesis: ``ok`` plus the worst sampled slack."""

    name: str
    ok: bool
    slack: float
    detail: str = ""
    applicable: bool = True


@dataclass
class VerificationReport:
    theorem_id: str
    scenario: str = ""
    lhs: float = math.nan
    rhs: float = math.nan
    sense: str = "<="
    margin: float = math.nan
    tolerance: float = DEFAULT_TOLERANCE
    equality_tolerance: float = EQUALITY_TOLERANCE
    passed: bool = False
    equality_expected: bool = False
    status: str = "error"
    checks: list[Check] = field(default_factory=list)
    hypotheses: list[Hypothesis] = field(default_factory=list)
    ingredients: dict[str, Any] = field(default_factory=dict)
    series: dict[str, list[list[float]]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    # -- assembly ---------------------------------------------------------
    def add_check(self, name, lhs, rhs, sense, x=None, equality=False) -> Check:
        chk = Check(name, lhs, rhs, sense, x=x, equality=equality)
        self.checks.append(chk)
        return chk

    def add_hypothesis(self, name, ok, slack, detail="", applicable=True) -> Hypothesis:
        hyp = Hypothesis(name, bool(ok), float(slack), detail, applicable)
        self.hypotheses.append(hyp)
        return hyp

    def ingredient(self, name, value, source):
        self.ingredients[name] = {"value": value, "source": source}

    @property
    def hypothesis_ok(self) -> bool:
        return all(h.ok for h in self.hypotheses)

    @property
    def applicable(self) -> bool:
        return all(h.applicable for h in self.hypotheses)

    @property
    def hypothesis_confidence(self) -> float:
        """Worst sampled slack over all hypotheses (inf when there are none)."""
        return min((h.slack for h in self.hypotheses), default=math.inf)

    @property
    def equality_satisfied(self) -> bool:
        return (not self.equality_expected) or abs(self.margin) <= self.equality_tolerance

    def finalize(self, vacuous: bool = False) -> "VerificationReport":
        """Bind lhs/rhs/margin to the worst check and derive pass and status."""
        if self.checks:
            worst = min(self.checks, key=lambda c: (math.inf if math.isnan(c.margin) else c.margin))
            self.lhs, self.rhs, self.sense, self.margin = worst.lhs, worst.rhs, worst.sense, worst.margin
        self.passed = bool(self.margin >= -self.tolerance) if not math.isnan(self.margin) else False
        if not self.applicable:
            self.status = "not-applicable"
        elif not self.hypothesis_ok:
            self.status = "hypothesis-failure"
        elif vacuous:
            self.status = "vacuous"
        elif not self.checks:
            self.status = "error"
        else:
            self.status = "pass" if self.passed else "fail"
        return self

    @classmethod
    def failure(cls, theorem_id: str, scenario: str, exc: BaseException) -> "VerificationReport":
        rep = cls(theorem_id=theorem_id, scenario=scenario, status="error")
        rep.notes.append(f"{type(exc).__name__}: {exc}")
        return rep

    # -- serialisation ----------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem_id": self.theorem_id,
            "scenario": self.scenario,
            "status": self.status,
            "pass": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "sense": self.sense,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "equality_expected": self.equality_expected,
            "equality_tolerance": self.equality_tolerance,
            "equality_satisfied": self.equality_satisfied,
            "hypothesis_confidence": self.hypothesis_confidence,
            "checks": [vars(c).copy() for c in self.checks],
            "hypotheses": [vars(h).copy() for h in self.hypotheses],
            "ingredients": self.ingredients,
            "series": self.series,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "VerificationReport":
        rep = cls(theorem_id=d["theorem_id"], scenario=d.get("scenario", ""))
        rep.lhs, rep.rhs, rep.sense = d["lhs"], d["rhs"], d["sense"]
        rep.margin, rep.tolerance = d["margin"], d["tolerance"]
        rep.equality_tolerance = d.get("equality_tolerance", EQUALITY_TOLERANCE)
        rep.passed, rep.status = d["pass"], d["status"]
        rep.equality_expected = d["equality_expected"]
        rep.checks = [Check(c["name"], c["lhs"], c["rhs"], c["sense"], x=c.get("x"),
                            equality=c.get("equality", False)) for c in d.get("checks", [])]
        rep.hypotheses = [Hypothesis(**h) for h in d.get("hypotheses", [])]
        rep.ingredients = d.get("ingredients", {})
        rep.series = d.get("series", {})
        rep.notes = list(d.get("notes", []))
        return rep
