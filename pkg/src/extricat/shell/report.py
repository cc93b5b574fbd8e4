"""Structured command results and their human / JSON renderings.

A report holds named tables (labelled integer grids), named object lists,
named verdicts and free-form structured data.  Everything is normalized to
plain JSON types on construction, so ``parse_report(emit_report(r, "json"))``
compares equal to ``r``; output contains no timings and uses sorted keys, so
identical inputs give byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .. import __version__
from ..verdict import Status, Verdict, combine

SCHEMA = "extricat.report/1"

EXIT_CODES = {Status.HOLDS: 0, Status.SKIPPED: 0, Status.FAILS: 1, Status.UNKNOWN: 2,
              Status.INCONSISTENT: 4}
EXIT_USAGE = 3


def _plain(x: Any) -> Any:
    """Recursively convert numpy values, tuples and verdicts to JSON types."""
    if isinstance(x, Verdict):
        return _plain(x.to_json())
    if isinstance(x, Status):
        return x.value
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    return x


@dataclass
class Table:
    rows: List[str]
    cols: List[str]
    data: List[List[int]]
    corner: str = ""

    def __post_init__(self):
        self.rows = [str(r) for r in self.rows]
        self.cols = [str(c) for c in self.cols]
        self.data = _plain(np.asarray(self.data).reshape(len(self.rows), len(self.cols)))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "data": self.data, "corner": self.corner}

    @classmethod
    def from_json(cls, d: dict) -> "Table":
        return cls(d["rows"], d["cols"], d["data"], d.get("corner", ""))

    def render(self) -> List[str]:
        cells = [[self.corner] + self.cols] + [[r] + [str(v) for v in row]
                                               for r, row in zip(self.rows, self.data)]
        widths = [max(len(row[k]) for row in cells) for k in range(len(cells[0]))]
        out = []
        for n, row in enumerate(cells):
            first = row[0].ljust(widths[0])
            rest = [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
            out.append("  ".join([first] + rest).rstrip())
            if n == 0:
                out.append("  ".join("-" * w for w in widths))
        return out


@dataclass
class Report:
    command: str
    scenario: str = ""
    scenario_hash: str = ""
    caps: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Table] = field(default_factory=dict)
    lists: Dict[str, List[str]] = field(default_factory=dict)
    verdicts: Dict[str, Verdict] = field(default_factory=dict)
    data: Dict[str, Any] = field(default_factory=dict)
    tool_version: str = __version__

    def __post_init__(self):
        self.caps = _plain(self.caps)
        self.lists = {k: [str(x) for x in v] for k, v in self.lists.items()}
        self.data = _plain(self.data)
        self.verdicts = {k: Verdict.from_json(_plain(v.to_json())) for k, v in self.verdicts.items()}

    def add_verdict(self, name: str, v: Verdict) -> None:
        self.verdicts[name] = Verdict.from_json(_plain(v.to_json()))

    def add_data(self, name: str, value: Any) -> None:
        self.data[name] = _plain(value)

    @property
    def status(self) -> Status:
        return combine(self.verdicts.values()).status

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "tool_version": self.tool_version,
            "command": self.command,
            "scenario": self.scenario,
            "scenario_hash": self.scenario_hash,
            "caps": self.caps,
            "status": self.status.value,
            "tables": {k: t.to_json() for k, t in self.tables.items()},
            "lists": self.lists,
            "verdicts": {k: v.to_json() for k, v in self.verdicts.items()},
            "data": self.data,
        }


def emit_report(r: Report, fmt: str = "human") -> str:
    if fmt == "json":
        return json.dumps(r.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt != "human":
        raise ValueError("format must be 'human' or 'json'")
    return _human(r)


def parse_report(text: str) -> Report:
    d = json.loads(text)
    if d.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {d.get('schema')!r}")
    return Report(command=d["command"], scenario=d["scenario"],
                  scenario_hash=d["scenario_hash"], caps=d["caps"],
                  tables={k: Table.from_json(t) for k, t in d["tables"].items()},
                  lists=d["lists"],
                  verdicts={k: Verdict.from_json(v) for k, v in d["verdicts"].items()},
                  data=d["data"], tool_version=d["tool_version"])


def _compact(x: Any) -> str:
    return json.dumps(x, sort_keys=True, ensure_ascii=False, separators=(", ", ": "))


def _render_data(x: Any, indent: int) -> List[str]:
    pad = " " * indent
    if isinstance(x, dict):
        out = []
        for k in sorted(x):
            v = x[k]
            line = _compact(v)
            if len(line) + len(k) + indent <= 96 or not isinstance(v, (dict, list)):
                out.append(f"{pad}{k}: {line}")
            else:
                out.append(f"{pad}{k}:")
                out.extend(_render_data(v, indent + 2))
        return out
    if isinstance(x, list):
        out = []
        for v in x:
            line = _compact(v)
            if len(line) + indent <= 96 or not isinstance(v, (dict, list)):
                out.append(f"{pad}- {line}")
            else:
                out.append(f"{pad}-")
                out.extend(_render_data(v, indent + 2))
        return out
    return [pad + _compact(x)]


def _human(r: Report) -> str:
    lines = [f"extricat {r.tool_version} — {r.command}"]
    if r.scenario:
        lines.append(f"scenario: {r.scenario} ({r.scenario_hash})")
    if r.caps:
        lines.append("caps: " + ", ".join(f"{k}={r.caps[k]}" for k in sorted(r.caps)))
    for name, t in r.tables.items():
        lines += ["", f"{name}:"] + ["  " + s for s in t.render()]
    for name, items in r.lists.items():
        lines += ["", f"{name} ({len(items)}): " + (", ".join(items) if items else "(none)")]
    if r.data:
        lines += [""] + _render_data(r.data, 0)
    if r.verdicts:
        lines.append("")
        width = max(len(s.value) for s in Status) + 2
        for name, v in r.verdicts.items():
            tag = f"[{v.status.value}]".ljust(width)
            lines.append(f"{tag} {name}" + (f" — {v.detail}" if v.detail else ""))
            if v.witness is not None:
                lines.extend(_render_data({"witness": v.witness}, width + 1))
            if v.caps_hit:
                lines.append(" " * (width + 1) + "caps hit: " + ", ".join(v.caps_hit))
    lines += ["", f"overall: {r.status.value}"]
    return "\n".join(lines) + "\n"
