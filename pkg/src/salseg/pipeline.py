"""End-to-end segmentation: input prep, saliency, initialization, evolution.

Saliency-aware models (``sdrel``, ``proposed``) run on Lab when given a color
raster; the other models consume the grayscale conversion. The saliency map
is computed once per image since it does not depend on the level set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .levelset import init_level_set
from .models import MODEL_IDS, SALIENCY_MODELS, EvolutionTrace, ModelParams, evolve
from .raster import srgb_to_lab, to_grayscale
from .saliency import SALIENCY_PRESETS, saliency_color, saliency_gray

__all__ = ["SegmentationResult", "prepare_model_inputs", "segment_raster"]


@dataclass
class SegmentationResult:
    model: str
    trace: EvolutionTrace
    saliency: np.ndarray | None
    work_image: np.ndarray
    phi0: np.ndarray


def prepare_model_inputs(img, model_id: str, force_gray: bool = False):
    """Return (working image, saliency map or None) for a model.

    Color input feeds sdrel/proposed in Lab (unless force_gray); all other
    models get the luminance conversion. Saliency uses the blur preset of
    the consuming model.
    """
    if model_id not in MODEL_IDS:
        raise ValueError(f"unknown model {model_id!r}; valid ids: {', '.join(MODEL_IDS)}")
    img = np.asarray(img, dtype=np.float64)
    is_color = img.ndim == 3
    if model_id not in SALIENCY_MODELS:
        return to_grayscale(img) if is_color else img, None
    sigma, ksize = SALIENCY_PRESETS[model_id]
    if is_color and not force_gray:
        lab = srgb_to_lab(img)
        return lab, saliency_color(lab, sigma=sigma, ksize=ksize)
    gray = to_grayscale(img) if is_color else img
    return gray, saliency_gray(gray, sigma=sigma, ksize=ksize)


def segment_raster(
    img,
    model_id: str,
    seed_region,
    params: ModelParams | None = None,
    force_gray: bool = False,
) -> SegmentationResult:
    """Segment one raster with the requested model from a seed region."""
    params = params or ModelParams()
    work, sal = prepare_model_inputs(img, model_id, force_gray=force_gray)
    height, width = work.shape[:2]
    phi0 = init_level_set(width, height, seed_region, params.p)
    trace = evolve(model_id, work, sal, phi0, params)
    return SegmentationResult(
        model=model_id, trace=trace, saliency=sal, work_image=work, phi0=phi0
    )
