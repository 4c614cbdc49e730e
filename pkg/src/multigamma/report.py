from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class IdentityReport:
    """Outcome of checking one identity at one sample.

    ``rel_residual`` is ``|lhs - rhs| / max(|lhs|, |rhs|, 1)``.
    """

    identity_id: str
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    threshold: float
    passed: bool
    sample: dict[str, Any] = field(default_factory=dict)
    policy: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def as_dict(self) -> dict[str, Any]:
        return {
            "identity": self.identity_id,
            "lhs": _cjson(self.lhs),
            "rhs": _cjson(self.rhs),
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "threshold": self.threshold,
            "pass": self.passed,
            "sample": {k: _jsonable(v) for k, v in self.sample.items()},
            "policy": self.policy,
            "extra": {k: _jsonable(v) for k, v in self.extra.items()},
        }


def _cjson(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _jsonable(v):
    if isinstance(v, complex):
        return _cjson(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    if isinstance(v, dict):
        return {k: _jsonable(u) for k, u in v.items()}
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


def residuals(lhs: complex, rhs: complex) -> tuple[float, float]:
    a = abs(lhs - rhs)
    return a, a / max(abs(lhs), abs(rhs), 1.0)


def make_report(identity_id, lhs, rhs, threshold, sample, policy, **extra) -> IdentityReport:
    lhs, rhs = complex(lhs), complex(rhs)
    a, rel = residuals(lhs, rhs)
    ok = bool(rel < threshold) and all(map(_finite, (lhs, rhs)))
    return IdentityReport(identity_id, lhs, rhs, a, rel, threshold, ok, dict(sample),
                          policy.snapshot(), dict(extra))


def _finite(z: complex) -> bool:
    return z.real == z.real and z.imag == z.imag and abs(z) != float("inf")
