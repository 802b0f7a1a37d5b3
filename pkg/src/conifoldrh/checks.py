"""Residual records and named predicates shared by the numerical layers.

Every identity check reports (lhs, rhs, absolute, relative) rather than a
bare boolean, so failures stay diagnosable from the JSON output alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Predicate:
    """A named region/validity condition with its numerical witness."""

    name: str
    ok: bool
    value: float | None = None    # e.g. the Im(...) that must be positive
    kind: str = "region"          # "region" | "tau" | "half-plane" | "numeric"

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "value": self.value,
                "kind": self.kind}


@dataclass
class Residual:
    """Result of one identity check: left value, right value, residuals."""

    name: str
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    meta: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, name: str, lhs: complex, rhs: complex, tol: float,
                meta: dict | None = None) -> "Residual":
        lhs = complex(lhs)
        rhs = complex(rhs)
        abs_err = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
        rel_err = abs_err / scale if scale > 0 else abs_err
        return cls(name=name, lhs=lhs, rhs=rhs, abs_err=abs_err,
                   rel_err=rel_err, tol=tol, passed=rel_err < tol,
                   meta=meta or {})

    @classmethod
    def exact(cls, name: str, equal: bool, meta: dict | None = None) -> "Residual":
        """Record for an exact (rational-arithmetic) comparison."""
        return cls(name=name, lhs=0, rhs=0, abs_err=0.0 if equal else float("inf"),
                   rel_err=0.0 if equal else float("inf"), tol=0.0, passed=equal,
                   meta=meta or {})

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tol": self.tol,
            "passed": self.passed,
            "meta": self.meta,
        }


def im_ratio(num: complex, den: complex) -> float:
    return (num / den).imag


def im_ratio_predicate(label: str, num: complex, den: complex,
                       kind: str = "region") -> Predicate:
    """Predicate Im(num/den) > 0 with the witness value recorded."""
    val = im_ratio(num, den)
    return Predicate(name=f"Im({label}) > 0", ok=val > 0, value=val, kind=kind)
