"""Machine-readable experiment reports.

One row per grid cell with a fixed column order: parameters alphabetically,
then exact and Monte-Carlo results, then bound values alphabetically, then
vacuous flags, then error / seed / runtime.  CSV uses 12 significant
digits, UTF-8 and LF line endings; JSON mirrors the same field names.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

PARAM_COLUMNS = ["H", "S", "c", "estimator", "eta", "family", "n", "zeta"]

RESULT_COLUMNS = ["exact_risk", "mc_mean", "mc_ci_lo", "mc_ci_hi", "mc_within_ci"]

BOUND_COLUMNS = [
    "classical_constant",
    "minimax_entropy_lower",
    "minimax_lower_hd",
    "mle_entropy_lower",
    "mle_entropy_upper",
    "mle_upper_simple",
    "mle_upper_tight",
    "simplex_lower",
    "threshold_upper",
]

FLAGGED_BOUNDS = [
    "minimax_entropy_lower",
    "minimax_lower_hd",
    "mle_entropy_upper",
    "simplex_lower",
    "threshold_upper",
]

VACUOUS_COLUMNS = [name + "_vacuous" for name in FLAGGED_BOUNDS]

COLUMNS = PARAM_COLUMNS + RESULT_COLUMNS + BOUND_COLUMNS + VACUOUS_COLUMNS + [
    "error", "seed", "runtime_ms",
]


@dataclass
class ReportRow:
    """One experiment cell: its parameters, results, bounds and metadata."""

    params: dict = field(default_factory=dict)
    exact_risk: Optional[float] = None
    mc_mean: Optional[float] = None
    mc_ci_lo: Optional[float] = None
    mc_ci_hi: Optional[float] = None
    mc_within_ci: Optional[bool] = None
    bounds: dict = field(default_factory=dict)
    vacuous: dict = field(default_factory=dict)
    error: Optional[str] = None
    seed: Optional[int] = None
    runtime_ms: Optional[float] = None

    def record(self) -> dict:
        rec = {}
        for name in PARAM_COLUMNS:
            rec[name] = self.params.get(name)
        rec["exact_risk"] = self.exact_risk
        rec["mc_mean"] = self.mc_mean
        rec["mc_ci_lo"] = self.mc_ci_lo
        rec["mc_ci_hi"] = self.mc_ci_hi
        rec["mc_within_ci"] = self.mc_within_ci
        for name in BOUND_COLUMNS:
            rec[name] = self.bounds.get(name)
        for name, col in zip(FLAGGED_BOUNDS, VACUOUS_COLUMNS):
            rec[col] = self.vacuous.get(name)
        rec["error"] = self.error
        rec["seed"] = self.seed
        rec["runtime_ms"] = self.runtime_ms
        return rec


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def render_csv(rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        rec = row.record()
        writer.writerow([_format_cell(rec[name]) for name in COLUMNS])
    return buffer.getvalue()


def render_json(rows) -> str:
    return json.dumps([row.record() for row in rows], indent=2) + "\n"


def write_report(rows, fmt: str, out_path: Optional[str]) -> None:
    """Render rows and write them to a file (or stdout when no path given)."""
    if fmt == "csv":
        text = render_csv(rows)
    elif fmt == "json":
        text = render_json(rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
