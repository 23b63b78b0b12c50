from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of a verification. ``violation`` names the first offending object."""

    check: str
    ok: bool
    details: dict[str, Any] = field(default_factory=dict)
    violation: Any = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check, "ok": self.ok, "details": _plain(self.details)}
        if self.violation is not None:
            out["violation"] = _plain(self.violation)
        return out


def _plain(obj: Any) -> Any:
    """Convert tuples/frozensets/Fractions into JSON-friendly values."""
    from fractions import Fraction

    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if obj == float("inf"):
        return "inf"
    return obj
