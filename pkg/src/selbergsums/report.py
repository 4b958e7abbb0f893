"""Tabular reports rendered as CSV, JSON or an aligned text table."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


def split_complex(row: dict) -> dict:
    """Replace complex values by <key>_re / <key>_im columns."""
    out = {}
    for k, v in row.items():
        if isinstance(v, complex):
            out[f"{k}_re"] = v.real
            out[f"{k}_im"] = v.imag
        else:
            out[k] = v
    return out


@dataclass
class Report:
    command: str
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    passed: bool = True

    def add(self, **row) -> None:
        self.rows.append(split_complex(row))

    @property
    def columns(self) -> list[str]:
        cols: list[str] = []
        for r in self.rows:
            cols += [k for k in r if k not in cols]
        return cols

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        if fmt == "pretty":
            return self.to_pretty()
        raise ValueError(f"unknown output format {fmt!r}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema={SCHEMA_VERSION} command={self.command}\n")
        for k, v in self.summary.items():
            buf.write(f"# {k}={_plain(v)}\n")
        writer = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n")
        writer.writeheader()
        for r in self.rows:
            writer.writerow({k: _plain(v) for k, v in r.items()})
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"schema": SCHEMA_VERSION, "command": self.command, "passed": self.passed,
               "summary": {k: _jsonable(v) for k, v in split_complex(self.summary).items()},
               "rows": [{k: _jsonable(v) for k, v in r.items()} for r in self.rows]}
        return json.dumps(doc, indent=2) + "\n"

    def to_pretty(self) -> str:
        cols = self.columns
        cells = [[_pretty(r.get(c, "")) for c in cols] for r in self.rows]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'}"]
        lines += [f"  {k}: {_pretty(v)}" for k, v in self.summary.items()]
        if cols:
            lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
            lines += ["  ".join(x.rjust(w) for x, w in zip(row, widths)) for row in cells]
        return "\n".join(lines) + "\n"


def _plain(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j"
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _pretty(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, complex):
        return f"{v.real:.6g}{v.imag:+.6g}j"
    return str(v)
