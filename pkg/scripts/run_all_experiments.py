#!/usr/bin/env python3
"""Run the three canned synthetic experiments and write their artifacts.

Usage: python3 scripts/run_all_experiments.py [output-dir]

Equivalent to `salseg repro --experiment <id> --out <dir>/<id>` for each id;
prints the pass/fail summary of every threshold check.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from salseg.cli import main as cli_main
from salseg.experiments import EXPERIMENT_IDS


def run(out_root: Path) -> int:
    status = 0
    for name in EXPERIMENT_IDS:
        print(f"=== {name} ===")
        rc = cli_main(["repro", "--experiment", name, "--out", str(out_root / name)])
        status = status or rc
    print(f"artifacts under {out_root}")
    return status


if __name__ == "__main__":
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("experiment-results")
    raise SystemExit(run(root))
