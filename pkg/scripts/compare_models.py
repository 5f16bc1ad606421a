#!/usr/bin/env python3
"""Segment one synthetic scene with all five models and print a score table.

Usage: python3 scripts/compare_models.py [preset] [output-dir]

Presets: two-phase-disk | six-intensity | star | shapes (default: six-intensity).
Writes the input image, per-model masks and contour overlays next to a CSV.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from salseg import imgio
from salseg.experiments import (
    shapes_case,
    six_intensity_case,
    star_case,
    two_phase_disk_case,
)
from salseg.metrics import ScoreReport, write_report
from salseg.models import MODEL_IDS, ModelParams
from salseg.pipeline import segment_raster

CASES = {
    "two-phase-disk": lambda: two_phase_disk_case(),
    "six-intensity": lambda: six_intensity_case(),
    "star": lambda: (lambda i, g, seeds: (i, g, seeds["centered-rect"]))(*star_case()),
    "shapes": lambda: shapes_case(),
}


def main(case_name: str, out_dir: Path) -> int:
    if case_name not in CASES:
        print(f"unknown preset {case_name!r}; valid: {', '.join(CASES)}", file=sys.stderr)
        return 1
    img, gt, seed = CASES[case_name]()
    out_dir.mkdir(parents=True, exist_ok=True)
    imgio.write_png(img, out_dir / "input.png")
    imgio.write_mask_png(gt, out_dir / "ground_truth.png")
    params = ModelParams(max_iters=800)
    reports = []
    print(f"{'model':10s} {'dice':>7s} {'jaccard':>8s} {'bfscore':>8s} {'iters':>6s}")
    for model in MODEL_IDS:
        result = segment_raster(img, model, seed, params)
        r = ScoreReport.compute(
            result.trace.mask, gt, image_id=case_name, model=model,
            iterations=result.trace.iterations_run, wall_ms=result.trace.wall_ms,
        )
        reports.append(r)
        imgio.write_mask_png(result.trace.mask, out_dir / f"{model}_mask.png")
        imgio.write_png(
            imgio.draw_overlay(img, result.trace.phi), out_dir / f"{model}_overlay.png"
        )
        print(f"{model:10s} {r.dice:7.4f} {r.jaccard:8.4f} {r.bfscore:8.4f} {r.iterations:6d}")
    write_report(reports, out_dir / "scores.csv")
    print(f"artifacts under {out_dir}")
    return 0


if __name__ == "__main__":
    name = sys.argv[1] if len(sys.argv) > 1 else "six-intensity"
    out = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("model-comparison") / name
    raise SystemExit(main(name, out))
