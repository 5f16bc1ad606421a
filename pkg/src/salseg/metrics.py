"""Segmentation quality metrics: Dice, Jaccard and the boundary F-score.

The standard formulas are the default. The source material this toolkit
follows prints internally inconsistent denominators for all three metrics;
those verbatim variants remain available via variant="as_printed" strictly
for comparison.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

__all__ = [
    "dice",
    "jaccard",
    "bfscore",
    "boundary_pixels",
    "default_theta",
    "ScoreReport",
    "write_report",
    "DegenerateMaskWarning",
]


class DegenerateMaskWarning(UserWarning):
    """Raised when a metric is evaluated on empty masks or empty boundaries."""


def _as_masks(sr, gt):
    sr = np.asarray(sr, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if sr.shape != gt.shape:
        raise ValueError(f"mask shapes differ: {sr.shape} vs {gt.shape}")
    return sr, gt


def dice(sr, gt, variant: str = "standard") -> float:
    """Overlap index 2|SR & GT| / (|SR| + |GT|).

    Two empty masks agree vacuously and score 1.0 (with a warning).
    """
    sr, gt = _as_masks(sr, gt)
    inter = np.count_nonzero(sr & gt)
    a, b = np.count_nonzero(sr), np.count_nonzero(gt)
    if a + b == 0:
        warnings.warn("dice of two empty masks", DegenerateMaskWarning, stacklevel=2)
        return 1.0
    if variant == "as_printed":  # denominator |GT| + |GT|
        return 2.0 * inter / (2.0 * b) if b else 0.0
    if variant != "standard":
        raise ValueError(f"unknown variant {variant!r}")
    return 2.0 * inter / (a + b)


def jaccard(sr, gt, variant: str = "standard") -> float:
    """Intersection over union |SR & GT| / |SR | GT|."""
    sr, gt = _as_masks(sr, gt)
    inter = np.count_nonzero(sr & gt)
    union = np.count_nonzero(sr | gt)
    if union == 0:
        warnings.warn("jaccard of two empty masks", DegenerateMaskWarning, stacklevel=2)
        return 1.0
    if variant == "as_printed":  # denominator read as |GT| + |GT|
        b = np.count_nonzero(gt)
        return inter / (2.0 * b) if b else 0.0
    if variant != "standard":
        raise ValueError(f"unknown variant {variant!r}")
    return inter / union


def boundary_pixels(mask) -> np.ndarray:
    """4-connected border of a mask; pixels outside the image count as background."""
    mask = np.asarray(mask, dtype=bool)
    interior = ndimage.binary_erosion(
        mask, structure=np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]]), border_value=0
    )
    return mask & ~interior


def default_theta(shape) -> float:
    """Distance tolerance: 0.75% of the image diagonal."""
    h, w = shape
    return 0.0075 * float(np.hypot(h, w))


def bfscore(sr, gt, theta: float | None = None, variant: str = "standard") -> float:
    """Boundary-matching score at pixel tolerance theta.

    Precision is the fraction of SR boundary pixels within theta of the GT
    boundary, recall the converse; the score is their harmonic mean
    2 p r / (p + r). Distances are exact Euclidean.
    """
    sr, gt = _as_masks(sr, gt)
    if theta is None:
        theta = default_theta(sr.shape)
    if theta <= 0:
        raise ValueError(f"theta must be > 0, got {theta}")
    sr_b = boundary_pixels(sr)
    gt_b = boundary_pixels(gt)
    n_sr, n_gt = np.count_nonzero(sr_b), np.count_nonzero(gt_b)
    if n_sr == 0 or n_gt == 0:
        warnings.warn("bfscore with an empty boundary", DegenerateMaskWarning, stacklevel=2)
    precision = _match_fraction(sr_b, gt_b, theta)
    recall = _match_fraction(gt_b, sr_b, theta)
    if precision + recall == 0:
        return 0.0
    if variant == "as_printed":  # half the harmonic mean
        return precision * recall / (precision + recall)
    if variant != "standard":
        raise ValueError(f"unknown variant {variant!r}")
    return 2.0 * precision * recall / (precision + recall)


def _match_fraction(from_b, to_b, theta):
    n = np.count_nonzero(from_b)
    if n == 0:
        return 0.0
    if not to_b.any():
        return 0.0
    dist_to_b = ndimage.distance_transform_edt(~to_b)
    return np.count_nonzero(dist_to_b[from_b] <= theta) / n


@dataclass
class ScoreReport:
    image_id: str
    model: str
    dice: float
    jaccard: float
    bfscore: float
    iterations: int | None = None
    wall_ms: float | None = None

    @classmethod
    def compute(cls, sr, gt, image_id="", model="", theta=None,
                iterations=None, wall_ms=None) -> "ScoreReport":
        return cls(
            image_id=image_id,
            model=model,
            dice=dice(sr, gt),
            jaccard=jaccard(sr, gt),
            bfscore=bfscore(sr, gt, theta=theta),
            iterations=iterations,
            wall_ms=wall_ms,
        )


REPORT_COLUMNS = ["image_id", "model", "dice", "jaccard", "bfscore", "iterations", "wall_ms"]


def write_report(reports: list[ScoreReport], path, append_means: bool = True) -> None:
    """Write per-image rows plus one mean row per model (image_id "mean")."""
    rows = [
        [r.image_id, r.model, f"{r.dice:.6f}", f"{r.jaccard:.6f}", f"{r.bfscore:.6f}",
         "" if r.iterations is None else r.iterations,
         "" if r.wall_ms is None else f"{r.wall_ms:.1f}"]
        for r in reports
    ]
    if append_means:
        by_model: dict[str, list[ScoreReport]] = {}
        for r in reports:
            by_model.setdefault(r.model, []).append(r)
        for model, rs in by_model.items():
            rows.append([
                "mean", model,
                f"{np.mean([r.dice for r in rs]):.6f}",
                f"{np.mean([r.jaccard for r in rs]):.6f}",
                f"{np.mean([r.bfscore for r in rs]):.6f}",
                "", "",
            ])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        writer.writerows(rows)
