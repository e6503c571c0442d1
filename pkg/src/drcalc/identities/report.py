"""Check reports and witness formatting."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

from ..exactmath import MultiPoly, fmt_rational


@dataclass
class CheckReport:
    name: str
    params: dict
    status: str  # "pass" or "fail"
    witness: str | None = None
    resources: dict = field(default_factory=dict)
    asserted: bool = True  # False for checks that only report (see check_dr_push)

    def __post_init__(self):
        if self.status not in ("pass", "fail"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and not self.witness:
            raise ValueError("a failing report needs a witness")

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def sort_key(self):
        return (self.name, repr(sorted(self.params.items())))

    def line(self) -> str:
        p = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        tail = f"  witness: {self.witness}" if self.witness else ""
        return f"{self.status.upper():4} {self.name}({p}){tail}"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": {k: _jsonable(v) for k, v in sorted(self.params.items())},
            "status": self.status,
            "witness": self.witness,
            "resources": dict(sorted(self.resources.items())),
            "asserted": self.asserted,
        }


def _jsonable(v: Any):
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def poly_witness(lhs: MultiPoly, rhs: MultiPoly, where: str = "") -> str | None:
    """First monomial where two polynomials differ, or None when equal."""
    lhs, rhs = MultiPoly.coerce(lhs), MultiPoly.coerce(rhs)
    diff = lhs - rhs
    if diff.is_zero():
        return None
    mono, _ = next(iter(diff.items()))
    name = "*".join(f"{v}^{k}" if k > 1 else v for v, k in sorted(mono.items()) if k) or "1"
    prefix = f"{where}: " if where else ""
    return f"{prefix}coefficient of {name}: lhs={fmt_rational(lhs.coefficient(mono))} rhs={fmt_rational(rhs.coefficient(mono))}"


def table_witness(lhs, rhs) -> str | None:
    hit = lhs.first_difference(rhs)
    if hit is None:
        return None
    s, a, b = hit
    return poly_witness(a, b, s.describe())


@contextmanager
def timed(resources: dict):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        resources["seconds"] = round(time.perf_counter() - t0, 4)
