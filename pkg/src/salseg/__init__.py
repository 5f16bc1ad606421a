"""Saliency-driven local-fitting active contours with level-set baselines.

Segmentation by evolving a level set under one of five force models (global
region means, local binary fitting, local image fitting, edge-gated global
saliency, and saliency-driven local fitting), plus synthetic scenes with
exact ground truth and the usual overlap / boundary quality metrics.
"""

from .levelset import (
    curvature,
    dirac,
    distance_regularizer,
    heaviside,
    init_level_set,
    laplacian,
    length_force,
    mask_from_phi,
)
from .metrics import ScoreReport, bfscore, dice, jaccard
from .models import (
    MODEL_IDS,
    EvolutionAborted,
    EvolutionTrace,
    ModelParams,
    compute_force,
    evolve,
)
from .pipeline import SegmentationResult, segment_raster
from .raster import (
    add_gaussian_noise,
    convolve2d,
    gaussian_kernel,
    srgb_to_lab,
    to_grayscale,
    truncated_window,
)
from .saliency import saliency_color, saliency_gray
from .synth import BiasSpec, SceneSpec, ShapeSpec, make_synthetic

__version__ = "0.1.0"

__all__ = [
    "MODEL_IDS",
    "BiasSpec",
    "EvolutionAborted",
    "EvolutionTrace",
    "ModelParams",
    "SceneSpec",
    "ScoreReport",
    "SegmentationResult",
    "ShapeSpec",
    "add_gaussian_noise",
    "bfscore",
    "compute_force",
    "convolve2d",
    "curvature",
    "dice",
    "dirac",
    "distance_regularizer",
    "evolve",
    "gaussian_kernel",
    "heaviside",
    "init_level_set",
    "jaccard",
    "laplacian",
    "length_force",
    "make_synthetic",
    "mask_from_phi",
    "saliency_color",
    "saliency_gray",
    "segment_raster",
    "srgb_to_lab",
    "to_grayscale",
    "truncated_window",
]
