"""Run every scripted trend sweep and collect the row data under results/.

Each target prints PASS/FAIL verdict lines; the raw per-cell rows land in
results/trend_<target>.csv for external plotting.
"""

from __future__ import annotations

import pathlib
import sys

from l1minimax.cli import main

TARGETS = ["cor2", "cor3-4", "cor6", "cor7", "cor9"]


def run() -> int:
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "results"
    out_dir.mkdir(exist_ok=True)
    worst = 0
    for target in TARGETS:
        out = out_dir / f"trend_{target}.csv"
        print(f"== {target} -> {out}")
        code = main(["reproduce", target, "--out", str(out)])
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(run())
