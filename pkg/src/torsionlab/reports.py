"""Report objects shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"
SKIPPED = "skipped"
STATUSES = (PASS, FAIL, HYPOTHESIS_NOT_MET, SKIPPED)


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays, fractions, tuples and domain objects to JSON types."""
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, float) and obj in (float("inf"), float("-inf")):
        return "infinite" if obj > 0 else "-infinite"
    return obj


@dataclass
class Report:
    """Outcome of one verification.

    ``recheck`` re-evaluates the violated predicate on the counterexample
    independently of the code path that found it; it returns True when the
    violation is confirmed.  It is never serialized.
    """

    check_id: str
    params: dict[str, Any]
    status: str
    witness: dict[str, Any] = field(default_factory=dict)
    counterexample: dict[str, Any] | None = None
    notes: list[str] = field(default_factory=list)
    recheck: Callable[[], bool] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "params": jsonable(self.params),
            "status": self.status,
            "witness": jsonable(self.witness),
            "counterexample": jsonable(self.counterexample),
            "notes": list(self.notes),
        }


def gated_status(hypothesis_met: bool, ok: bool) -> str:
    if not hypothesis_met:
        return HYPOTHESIS_NOT_MET
    return PASS if ok else FAIL
