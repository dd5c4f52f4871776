"""Run reports and their text, CSV and JSON-record renderings.

Floats are written with ``repr`` so a report is byte-identical across runs
and round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


def fmt(value):
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, float):
        return repr(float(value))
    if hasattr(value, "tolist"):
        return fmt(value.tolist())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(fmt(v) for v in value) + "]"
    return str(value)


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *row):
        self.rows.append(list(row))


@dataclass
class RunReport:
    command: str
    scenario: str
    gates: list = field(default_factory=list)
    quantities: list = field(default_factory=list)
    tables: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    timing: float | None = None

    def add(self, key, value):
        self.quantities.append((key, value))

    def table(self, name, columns):
        t = Table(name, list(columns))
        self.tables.append(t)
        return t

    def verdict(self, name, value):
        self.verdicts.append((name, value))

    @property
    def gates_failed(self):
        return any(not g.passed for g in self.gates)

    def to_record(self):
        rec = {
            "command": self.command,
            "scenario": self.scenario,
            "gates": [g.to_record() for g in self.gates],
            "quantities": {k: v for k, v in self.quantities},
            "tables": {t.name: [dict(zip(t.columns, r)) for r in t.rows] for t in self.tables},
            "verdicts": {k: v for k, v in self.verdicts},
        }
        if self.timing is not None:
            rec["timing_seconds"] = self.timing
        return rec

    def render_text(self):
        out = [f"# {self.command}: {self.scenario}"]
        if self.gates:
            out.append("gates:")
            for g in self.gates:
                detail = f" ({g.detail})" if g.detail else ""
                out.append(f"  [{'pass' if g.passed else 'FAIL'}] {g.name}{detail}")
        for k, v in self.quantities:
            out.append(f"{k}: {fmt(v)}")
        for t in self.tables:
            out.append(f"{t.name}:")
            out.append("  " + " | ".join(t.columns))
            for r in t.rows:
                out.append("  " + " | ".join(fmt(x) for x in r))
        for k, v in self.verdicts:
            out.append(f"verdict {k}: {fmt(v)}")
        if self.timing is not None:
            out.append(f"timing_seconds: {self.timing!r}")
        return "\n".join(out) + "\n"

    def render_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "command", "section", "key", "value"])
        for g in self.gates:
            w.writerow([self.scenario, self.command, "gate", g.name, fmt(g.passed)])
        for k, v in self.quantities:
            w.writerow([self.scenario, self.command, "quantity", k, fmt(v)])
        for t in self.tables:
            for i, r in enumerate(t.rows):
                for c, x in zip(t.columns, r):
                    w.writerow([self.scenario, self.command, t.name, f"{i}.{c}", fmt(x)])
        for k, v in self.verdicts:
            w.writerow([self.scenario, self.command, "verdict", k, fmt(v)])
        return buf.getvalue()

    def render(self, fmt_name="text"):
        if fmt_name == "text":
            return self.render_text()
        if fmt_name == "csv":
            return self.render_csv()
        if fmt_name == "records":
            return json.dumps(self.to_record(), default=_jsonable) + "\n"
        raise ValueError(f"unknown format {fmt_name!r}")


def _jsonable(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    return str(obj)
