"""Frequency-tuned saliency maps for grayscale and Lab color images.

Saliency is the per-pixel distance between the image's global mean and a
lightly Gaussian-blurred copy of the image, rescaled so the most salient
pixel reads 255. The same map serves two model presets that differ only in
the blur parameters.
"""

from __future__ import annotations

import numpy as np

from .raster import convolve2d, gaussian_kernel

__all__ = [
    "saliency_gray",
    "saliency_color",
    "normalize_saliency",
    "SALIENCY_PRESETS",
]

# (sigma, kernel size) of the Gaussian blur per consuming model
SALIENCY_PRESETS = {
    "proposed": (0.5, 5),
    "sdrel": (0.8, 3),
}

# maps whose dynamic range is below this are treated as identically zero,
# so float dust on constant images is not blown up by normalization
_ZERO_TOL = 1e-9


def normalize_saliency(s: np.ndarray) -> np.ndarray:
    """Rescale a non-negative map so its maximum is 255; zero maps stay zero."""
    s = np.asarray(s, dtype=np.float64)
    peak = s.max(initial=0.0)
    if peak <= _ZERO_TOL:
        return np.zeros_like(s)
    return s * (255.0 / peak)


def saliency_gray(
    img: np.ndarray, sigma: float = 0.5, ksize: int = 5, normalized: bool = True
) -> np.ndarray:
    """|global mean - Gaussian blur| saliency of a single-channel raster."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected 2-D raster, got shape {img.shape}")
    blurred = convolve2d(img, gaussian_kernel(sigma, ksize))
    s = np.abs(img.mean() - blurred)
    return normalize_saliency(s) if normalized else s


def saliency_color(
    lab: np.ndarray, sigma: float = 0.5, ksize: int = 5, normalized: bool = True
) -> np.ndarray:
    """Euclidean distance between the mean Lab vector and the blurred image.

    The input must already be in Lab; the blur is applied per channel and
    the map is scalar.
    """
    lab = np.asarray(lab, dtype=np.float64)
    if lab.ndim != 3 or lab.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) Lab raster, got shape {lab.shape}")
    kernel = gaussian_kernel(sigma, ksize)
    mean_vec = lab.reshape(-1, 3).mean(axis=0)
    sq = np.zeros(lab.shape[:2])
    for c in range(3):
        sq += (mean_vec[c] - convolve2d(lab[:, :, c], kernel)) ** 2
    s = np.sqrt(sq)
    return normalize_saliency(s) if normalized else s
