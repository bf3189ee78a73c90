"""Verdicts, reason codes and the report returned by every decision procedure."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class Verdict(str, enum.Enum):
    TIGHT = "tight"
    NOT_TIGHT = "not_tight"
    NOT_APPLICABLE = "not_applicable"


class Reason(str, enum.Enum):
    NOT_CONNECTED = "NOT_CONNECTED"
    NOT_2_NEIGHBOURLY = "NOT_2_NEIGHBOURLY"
    NOT_ORIENTABLE = "NOT_ORIENTABLE"
    LINK_NOT_PRIMITIVE_FORM = "LINK_NOT_PRIMITIVE_FORM"
    MU1_NOT_INTEGRAL = "MU1_NOT_INTEGRAL"
    MU1_NE_BETA1 = "MU1_NE_BETA1"
    NOT_MANIFOLD = "NOT_MANIFOLD"
    HOMOLOGY_OBSTRUCTION = "HOMOLOGY_OBSTRUCTION"
    WRONG_INPUT_CLASS = "WRONG_INPUT_CLASS"


def frac_str(x: Fraction | int | None) -> str | None:
    """Render an exact rational as ``p/q`` (integers too, e.g. ``0/1``)."""
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class TightnessReport:
    verdict: Verdict
    algorithm: str
    field: str
    reason: Reason | None = None
    mu1: Fraction | None = None
    beta1: int | None = None
    certificate: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    # structured certificate object (oracle witness, DP obstruction); not serialised
    witness: Any = None

    @property
    def tight(self) -> bool:
        return self.verdict is Verdict.TIGHT

    def to_dict(self, timings: bool = False) -> dict[str, Any]:
        d: dict[str, Any] = {
            "verdict": self.verdict.value,
            "algorithm": self.algorithm,
            "field": self.field,
            "reason": self.reason.value if self.reason else None,
            "mu1": frac_str(self.mu1),
            "beta1": self.beta1,
            "certificate": self.certificate,
            "notes": list(self.notes),
        }
        if timings:
            d["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return d
