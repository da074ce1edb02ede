"""Three-valued decisions and their certificates."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

# Below this relative size an eigenvalue is rounding noise, i.e. exactly zero.
NOISE_FLOOR = 128 * np.finfo(float).eps


class Decision(str, enum.Enum):
    YES = "yes"
    NO = "no"
    BOUNDARY = "boundary"


def combine(decisions) -> Decision:
    decisions = list(decisions)
    if any(d is Decision.NO for d in decisions):
        return Decision.NO
    if any(d is Decision.BOUNDARY for d in decisions):
        return Decision.BOUNDARY
    return Decision.YES


def sign_decision(value: float, scale: float, tol: float) -> str:
    """Classify ``value`` against zero as 'neg', 'zero', 'band' or 'pos'.

    'zero' means within rounding of an exact zero; 'band' is the open
    tolerance shell where the sign cannot be trusted.
    """
    noise = min(tol, NOISE_FLOOR) * scale
    if abs(value) <= noise:
        return "zero"
    if abs(value) <= tol * scale:
        return "band"
    return "pos" if value > 0 else "neg"


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.complexfloating):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Decision):
        return obj.value
    return obj


@dataclass
class Certificate:
    eigenvalues: list = field(default_factory=list)
    null_basis: list = field(default_factory=list)
    violated: str | None = None
    witness: list | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"eigenvalues": _jsonable(self.eigenvalues),
               "null_basis": _jsonable(self.null_basis),
               "violated": self.violated,
               "witness": _jsonable(self.witness) if self.witness is not None else None}
        out.update(_jsonable(self.extra))
        return out


@dataclass
class Verdict:
    decision: Decision
    conditions: dict[str, Decision] = field(default_factory=dict)
    certificate: Certificate = field(default_factory=Certificate)

    def __bool__(self):
        raise TypeError("Verdict is three-valued; compare .decision explicitly")

    @property
    def yes(self) -> bool:
        return self.decision is Decision.YES

    @property
    def no(self) -> bool:
        return self.decision is Decision.NO

    def to_json(self) -> dict:
        return {"decision": self.decision.value,
                "conditions": {k: v.value for k, v in self.conditions.items()},
                "certificate": self.certificate.to_json()}
