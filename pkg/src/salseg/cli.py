"""Command-line front end.

Verbs:
  segment   run one model on one image, write mask / overlay / trace
  bench     score models over a directory of image + ground-truth pairs
  repro     run a canned synthetic experiment with pass/fail summary
  saliency  export the saliency map of an image as PGM
  synth     render a synthetic scene (preset or JSON spec) with its mask

Exit codes: 0 success, 1 usage or input error, 2 numerical abort.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import experiments, imgio
from .metrics import ScoreReport, write_report
from .models import MODEL_IDS, EvolutionAborted, ModelParams
from .pipeline import segment_raster
from .raster import add_gaussian_noise, srgb_to_lab, to_grayscale
from .saliency import SALIENCY_PRESETS, saliency_color, saliency_gray
from .synth import SceneSpec, make_synthetic

_PARAM_FLAGS = [
    # (flag, ModelParams field, type)
    ("--dt", "dt", float),
    ("--p", "p", float),
    ("--eps", "eps", float),
    ("--mu", "mu", float),
    ("--nu", "nu", float),
    ("--sigma-s", "sigma_s", float),
    ("--sigma-m", "sigma_m", float),
    ("--sigma-lbf", "sigma_lbf", float),
    ("--lambda1", "lambda1", float),
    ("--lambda2", "lambda2", float),
    ("--alpha1", "alpha1", float),
    ("--alpha2", "alpha2", float),
    ("--nu-cv", "nu_cv", float),
    ("--max-iters", "max_iters", int),
    ("--tol", "tol", float),
]


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_param_flags(parser):
    group = parser.add_argument_group("model parameters")
    group.add_argument("--params", metavar="FILE", help="JSON file with parameter overrides")
    for flag, name, typ in _PARAM_FLAGS:
        group.add_argument(flag, dest=f"param_{name}", type=typ, default=None)


def _params_from_args(args) -> ModelParams:
    overrides = {}
    if getattr(args, "params", None):
        with open(args.params) as fh:
            overrides.update(json.load(fh))
    for _, name, _ in _PARAM_FLAGS:
        value = getattr(args, f"param_{name}")
        if value is not None:
            overrides[name] = value
    return ModelParams.from_dict(overrides)


def _parse_seed_region(text, width, height):
    if text is None:
        # default: centered rectangle covering half of each dimension
        return {
            "kind": "rect",
            "x": width // 4,
            "y": height // 4,
            "w": width // 2,
            "h": height // 2,
        }
    spec = json.loads(text)
    if spec.get("kind") == "mask":
        mask_img = imgio.read_image(spec["path"])
        spec = {"kind": "mask", "mask": np.asarray(mask_img) > 127}
    return spec


def _check_model(model):
    if model not in MODEL_IDS:
        raise ValueError(f"unknown model {model!r}; valid ids: {', '.join(MODEL_IDS)}")


def _cmd_segment(args) -> int:
    _check_model(args.model)
    params = _params_from_args(args)
    img = imgio.read_image(args.input)
    if args.noise_sigma:
        img = add_gaussian_noise(img, args.noise_sigma, args.seed)
    height, width = img.shape[:2]
    seed_region = _parse_seed_region(args.seed_region, width, height)

    gt = None
    if args.gt:
        gt = imgio.read_image(args.gt)
        if gt.shape[:2] != img.shape[:2]:
            raise ValueError(
                f"ground truth {gt.shape[:2]} does not match image {img.shape[:2]}"
            )
        gt = np.asarray(gt if gt.ndim == 2 else gt[:, :, 0]) > 127

    result = segment_raster(img, args.model, seed_region, params, force_gray=args.gray)

    os.makedirs(args.out, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.input))[0]
    out = lambda suffix: os.path.join(args.out, f"{stem}_{suffix}")  # noqa: E731
    imgio.write_mask_png(result.trace.mask, out("mask.png"))
    imgio.write_png(imgio.draw_overlay(img, result.trace.phi), out("overlay.png"))
    if result.saliency is not None:
        imgio.write_pgm(result.saliency, out("saliency.pgm"))
    trace_rows = "".join(
        f"{i},{n}\n" for i, n in enumerate(result.trace.flip_counts)
    )
    imgio.atomic_write_bytes(out("trace.csv"), ("iteration,flips\n" + trace_rows).encode())
    if gt is not None:
        report = ScoreReport.compute(
            result.trace.mask, gt, image_id=stem, model=args.model,
            iterations=result.trace.iterations_run,
        )
        write_report([report], out("scores.csv"), append_means=False)
        print(f"{stem}: dice={report.dice:.4f} jaccard={report.jaccard:.4f} "
              f"bfscore={report.bfscore:.4f}")
    print(
        f"{args.model} finished after {result.trace.iterations_run} iterations "
        f"({'converged' if result.trace.converged else 'budget reached'}, "
        f"{result.trace.wall_ms:.0f} ms)"
    )
    return 0


def _dataset_pairs(directory):
    entries = sorted(os.listdir(directory))
    images = [
        f for f in entries
        if f.lower().endswith((".png", ".pgm")) and "_gt." not in f.lower()
    ]
    pairs = []
    for name in images:
        stem = os.path.splitext(name)[0]
        gt_name = next(
            (f"{stem}_gt{ext}" for ext in (".png", ".pgm")
             if f"{stem}_gt{ext}" in entries),
            None,
        )
        pairs.append((stem, os.path.join(directory, name),
                      os.path.join(directory, gt_name) if gt_name else None))
    return pairs


def _cmd_bench(args) -> int:
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    for m in models:
        _check_model(m)
    params = _params_from_args(args)
    pairs = _dataset_pairs(args.dir)
    if not pairs:
        raise ValueError(f"no images found in {args.dir}")
    reports = []
    for stem, img_path, gt_path in pairs:
        if gt_path is None:
            print(f"warning: no ground truth for {stem}, skipped", file=sys.stderr)
            continue
        img = imgio.read_image(img_path)
        gt = imgio.read_image(gt_path)
        gt = np.asarray(gt if gt.ndim == 2 else gt[:, :, 0]) > 127
        height, width = img.shape[:2]
        seed_region = _parse_seed_region(args.seed_region, width, height)
        for model in models:
            result = segment_raster(img, model, seed_region, params, force_gray=args.gray)
            reports.append(
                ScoreReport.compute(
                    result.trace.mask, gt, image_id=stem, model=model,
                    iterations=result.trace.iterations_run,
                    wall_ms=result.trace.wall_ms,
                )
            )
    if not reports:
        raise ValueError("no image/ground-truth pairs could be scored")
    write_report(reports, args.out)
    print(f"wrote {len(reports)} rows (+ means) to {args.out}")
    return 0


def _cmd_repro(args) -> int:
    if args.experiment not in experiments.EXPERIMENT_IDS:
        raise ValueError(
            f"unknown experiment {args.experiment!r}; "
            f"valid: {', '.join(experiments.EXPERIMENT_IDS)}"
        )
    params = _params_from_args(args)
    report = experiments.run_experiment(
        args.experiment, params if _has_overrides(args) else None
    )
    os.makedirs(args.out, exist_ok=True)
    write_report(report.reports, os.path.join(args.out, f"{report.name}.csv"))
    for (image_id, model), (img, mask) in report.artifacts.get("overlays", {}).items():
        safe = image_id.replace("/", "_")
        phi = np.where(mask, 1.0, -1.0)
        imgio.write_png(
            imgio.draw_overlay(img, phi),
            os.path.join(args.out, f"{safe}_{model}_overlay.png"),
        )
    lines = []
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"[{status}] {check.label}: {check.detail}")
    summary = "\n".join(lines) + "\n"
    imgio.atomic_write_bytes(os.path.join(args.out, "summary.txt"), summary.encode())
    print(summary, end="")
    return 0


def _has_overrides(args) -> bool:
    if getattr(args, "params", None):
        return True
    return any(getattr(args, f"param_{name}") is not None for _, name, _ in _PARAM_FLAGS)


def _cmd_saliency(args) -> int:
    img = imgio.read_image(args.input)
    sigma, ksize = SALIENCY_PRESETS[args.preset]
    if args.sigma is not None:
        sigma = args.sigma
    if args.ksize is not None:
        ksize = args.ksize
    if img.ndim == 3 and not args.gray:
        s = saliency_color(srgb_to_lab(img), sigma=sigma, ksize=ksize)
    else:
        s = saliency_gray(to_grayscale(img), sigma=sigma, ksize=ksize)
    imgio.write_pgm(s, args.out)
    print(f"wrote saliency map to {args.out}")
    return 0


_SCENE_PRESETS = {
    "two-phase-disk": lambda: experiments.two_phase_disk_case()[:2],
    "six-intensity": lambda: experiments.six_intensity_case()[:2],
    "star": lambda: experiments.star_case()[:2],
    "shapes": lambda: experiments.shapes_case()[:2],
}


def _cmd_synth(args) -> int:
    if bool(args.preset) == bool(args.spec):
        raise ValueError("give exactly one of --preset or --spec")
    if args.preset:
        if args.preset not in _SCENE_PRESETS:
            raise ValueError(
                f"unknown preset {args.preset!r}; valid: {', '.join(_SCENE_PRESETS)}"
            )
        img, gt = _SCENE_PRESETS[args.preset]()
    else:
        with open(args.spec) as fh:
            img, gt = make_synthetic(SceneSpec.from_dict(json.load(fh)))
    if args.noise_sigma:
        img = add_gaussian_noise(img, args.noise_sigma, args.seed)
    imgio.write_png(img, args.out_image)
    imgio.write_mask_png(gt, args.out_mask)
    print(f"wrote {args.out_image} and {args.out_mask}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="salseg", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment one image")
    p.add_argument("--input", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed-region", help="JSON region spec (default: centered rectangle)")
    p.add_argument("--gt", help="ground-truth mask to score against")
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0, help="noise RNG seed")
    p.add_argument("--gray", action="store_true", help="force the grayscale path")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("bench", help="score models over an image/_gt directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--models", default=",".join(MODEL_IDS))
    p.add_argument("--out", required=True, help="CSV report path")
    p.add_argument("--seed-region")
    p.add_argument("--gray", action="store_true")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("repro", help="run a canned synthetic experiment")
    p.add_argument("--experiment", required=True,
                   help="|".join(experiments.EXPERIMENT_IDS))
    p.add_argument("--out", required=True, help="output directory")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_repro)

    p = sub.add_parser("saliency", help="export a saliency map as PGM")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--preset", choices=sorted(SALIENCY_PRESETS), default="proposed")
    p.add_argument("--sigma", type=float)
    p.add_argument("--ksize", type=int)
    p.add_argument("--gray", action="store_true")
    p.set_defaults(func=_cmd_saliency)

    p = sub.add_parser("synth", help="render a synthetic scene")
    p.add_argument("--preset", help="|".join(_SCENE_PRESETS))
    p.add_argument("--spec", help="scene spec JSON file")
    p.add_argument("--out-image", required=True)
    p.add_argument("--out-mask", required=True)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except EvolutionAborted as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
