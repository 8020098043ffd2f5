"""Structured command reports, rendered as a text table or one JSON document."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

METHODS = ("spectral", "quadrature", "oracle", "monte-carlo", "formula", "exact")
UNITS = ("time", "steps", "jumps/time", "probability", "count", "")


def fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return str(v)
        return f"{v:.12g}"
    return str(v)


def _num(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, float):
        return float(f"{v:.12g}")
    return v


@dataclass
class Result:
    name: str
    value: object
    units: str
    method: str
    tolerance: float | None = None
    stderr: float | None = None
    exact: str | None = None
    note: str | None = None

    def __post_init__(self):
        assert self.method in METHODS, self.method
        assert self.units in UNITS, self.units
        if isinstance(self.value, Fraction):
            self.exact = fmt(self.value)


@dataclass
class Check:
    name: str
    status: str  # pass | fail | skip
    detail: str = ""


@dataclass
class Report:
    command: list[str]
    graph: dict
    results: list[Result] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, name, value, units, method, **kw) -> Result:
        r = Result(name, value, units, method, **kw)
        self.results.append(r)
        return r

    def check(self, name: str, ok: bool | None, detail: str = "") -> Check:
        status = "skip" if ok is None else ("pass" if ok else "fail")
        c = Check(name, status, detail)
        self.checks.append(c)
        return c

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict:
        results = []
        for r in self.results:
            d = {k: v for k, v in asdict(r).items() if v is not None}
            d["value"] = _num(r.value) if not isinstance(r.value, (list, tuple)) else [_num(x) for x in r.value]
            if r.stderr is not None:
                d["stderr"] = _num(r.stderr)
            results.append(d)
        return {
            "command": self.command,
            "graph": self.graph,
            "results": results,
            "checks": [asdict(c) for c in self.checks],
            "meta": self.meta,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_text(self) -> str:
        lines = ["$ " + " ".join(self.command)]
        g = self.graph
        lines.append(
            f"graph: n={g['n']} m={g['m']} total_weight={fmt(g['total_weight'])} "
            f"degree=[{g['d_min']}, {g['d_max']}] vertex_weight=[{fmt(g['w_min'])}, {fmt(g['w_max'])}] "
            f"bipartite={fmt(g['bipartite'])}"
        )
        if self.results:
            rows = []
            for r in self.results:
                if isinstance(r.value, (list, tuple)):
                    val = "[" + ", ".join(fmt(v) for v in r.value) + "]"
                else:
                    val = fmt(r.value)
                    if isinstance(r.value, Fraction) and r.value.denominator != 1:
                        val += f" (≈{fmt(float(r.value))})"
                if r.stderr is not None:
                    val += f" ± {fmt(r.stderr)}"
                extra = []
                if r.tolerance is not None:
                    extra.append(f"tol={fmt(r.tolerance)}")
                if r.note:
                    extra.append(r.note)
                rows.append((r.name, val, r.units, r.method, "; ".join(extra)))
            widths = [max(len(row[k]) for row in rows) for k in range(4)]
            lines.append("")
            for row in rows:
                cells = [row[k].ljust(widths[k]) for k in range(4)]
                lines.append("  ".join(cells + [row[4]]).rstrip())
        if self.checks:
            lines.append("")
            for c in self.checks:
                lines.append(f"[{c.status.upper():4}] {c.name}" + (f": {c.detail}" if c.detail else ""))
            n_fail = len(self.failed)
            n_pass = sum(c.status == "pass" for c in self.checks)
            n_skip = sum(c.status == "skip" for c in self.checks)
            lines.append(f"{n_pass} passed, {n_fail} failed, {n_skip} skipped")
        for note in self.notes:
            lines.append(f"note: {note}")
        if self.meta:
            lines.append("meta: " + " ".join(f"{k}={fmt(v)}" for k, v in self.meta.items()))
        return "\n".join(lines) + "\n"
