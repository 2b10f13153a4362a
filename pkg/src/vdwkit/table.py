"""Grid of small values: one row per function, one column per s."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from .problems import Family, Interval, ProblemSpec

FUNCTIONS = {
    "G": Family.G,
    "w": Family.W_MIXED,
    "M": Family.M,
    "w1": Family.W1,
    "wstar": Family.W_STAR,
    "wdiag": Family.W_DIAGONAL,
}
ROW_ORDER = ("G", "w", "M", "w1", "wstar", "wdiag")
ROW_LABEL = {
    "G": "G({k},s)",
    "w": "w({k},s)",
    "M": "M({k},s)",
    "w1": "w1({k},s)",
    "wstar": "w*({k};s)",
    "wdiag": "w({k};s)",
}
FORMATS = ("table", "csv", "json")
UNKNOWN = "?"
AT_LEAST = "≥"


def function_spec(name: str, k: int, s: int) -> ProblemSpec:
    return ProblemSpec(FUNCTIONS[name], (k, s))


def cell_text(iv: Optional[Interval]) -> str:
    if iv is None:
        return UNKNOWN
    if iv.is_exact:
        return str(iv.lo)
    return f"{AT_LEAST}{iv.lo}"


@dataclass
class TableData:
    k: int
    s_values: List[int]
    rows: Dict[str, List[str]]  # function name -> cells, in s_values order

    @classmethod
    def build(cls, functions: Sequence[str], k: int, s_max: int,
              cell: Callable[[ProblemSpec], Optional[Interval]]) -> "TableData":
        unknown = [f for f in functions if f not in FUNCTIONS]
        if unknown:
            raise ValueError(f"unknown function(s): {', '.join(unknown)}")
        if s_max < 2:
            raise ValueError("s_max must be at least 2")
        s_values = list(range(2, s_max + 1))
        chosen = [f for f in ROW_ORDER if f in functions]
        rows = {f: [cell_text(cell(function_spec(f, k, s))) for s in s_values] for f in chosen}
        return cls(k, s_values, rows)

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        if fmt == "table":
            return self.to_text()
        raise ValueError(f"unknown format {fmt!r}")

    def to_text(self) -> str:
        labels = {f: ROW_LABEL[f].format(k=self.k) for f in self.rows}
        lw = max([len("s")] + [len(v) for v in labels.values()])
        cells = [str(s) for s in self.s_values] + [c for r in self.rows.values() for c in r]
        cw = max(len(c) for c in cells) if cells else 1
        head = f"{'s':<{lw}} |" + "".join(f" {s:>{cw}}" for s in map(str, self.s_values))
        lines = [head, "-" * len(head)]
        for f, r in self.rows.items():
            lines.append(f"{labels[f]:<{lw}} |" + "".join(f" {c:>{cw}}" for c in r))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"k={self.k}"] + self.s_values)
        for f, r in self.rows.items():
            w.writerow([f] + r)
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"k": self.k, "s": self.s_values,
               "rows": [{"function": f, "cells": r} for f, r in self.rows.items()]}
        return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "TableData":
        reader = list(csv.reader(io.StringIO(text)))
        if not reader or not reader[0] or not reader[0][0].startswith("k="):
            raise ValueError("not a value table: header must start with k=")
        k = int(reader[0][0][2:])
        s_values = [int(x) for x in reader[0][1:]]
        rows = {}
        for row in reader[1:]:
            if not row:
                continue
            if row[0] not in FUNCTIONS or len(row) != len(s_values) + 1:
                raise ValueError(f"bad table row: {row}")
            rows[row[0]] = row[1:]
        return cls(k, s_values, rows)

    def intervals(self) -> Dict[ProblemSpec, Interval]:
        """The known cells as values: exact numbers and lower bounds."""
        out = {}
        for f, r in self.rows.items():
            for s, c in zip(self.s_values, r):
                if c == UNKNOWN:
                    continue
                spec = function_spec(f, self.k, s)
                out[spec] = Interval(int(c[1:])) if c.startswith(AT_LEAST) else Interval.exact(int(c))
        return out
