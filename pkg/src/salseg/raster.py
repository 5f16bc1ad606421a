"""Image rasters, color conversion, Gaussian kernels, 2-D convolution and noise.

A raster is a plain float64 ndarray: shape (H, W) for single-channel,
(H, W, 3) for color, samples nominally in [0, 255] (Lab rasters use the
native Lab ranges instead). Kernels are odd-sized square float64 arrays
with non-negative weights summing to 1.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

__all__ = [
    "to_grayscale",
    "srgb_to_lab",
    "gaussian_kernel",
    "truncated_window",
    "convolve2d",
    "add_gaussian_noise",
]

# sRGB -> XYZ (D65, 2 degree observer)
_RGB2XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_WHITE = np.array([0.95047, 1.0, 1.08883])


def to_grayscale(img: np.ndarray) -> np.ndarray:
    """Convert an RGB raster to luminance with 0.299/0.587/0.114 weights.

    Single-channel input passes through unchanged.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        return img
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected (H, W) or (H, W, 3) raster, got {img.shape}")
    return img[:, :, 0] * 0.299 + img[:, :, 1] * 0.587 + img[:, :, 2] * 0.114


def srgb_to_lab(img: np.ndarray) -> np.ndarray:
    """Convert an 8-bit-range sRGB raster to CIE 1976 L*a*b* (D65).

    Returns an (H, W, 3) array with L in [0, 100] and signed a/b channels.
    Out-of-gamut intermediates are clamped at 0.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) raster, got {img.shape}")
    c = img / 255.0
    lin = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = lin @ _RGB2XYZ.T
    t = np.maximum(xyz / _WHITE, 0.0)
    delta = 6.0 / 29.0
    f = np.where(t > delta**3, np.cbrt(t), t / (3 * delta**2) + 4.0 / 29.0)
    lab = np.empty_like(xyz)
    lab[:, :, 0] = 116.0 * f[:, :, 1] - 16.0
    lab[:, :, 1] = 500.0 * (f[:, :, 0] - f[:, :, 1])
    lab[:, :, 2] = 200.0 * (f[:, :, 1] - f[:, :, 2])
    return lab


def gaussian_kernel(sigma: float, size: int) -> np.ndarray:
    """Sampled isotropic Gaussian kernel, normalized to unit sum.

    Weights are exp(-(dx^2 + dy^2) / (2 sigma^2)) on the odd `size` x `size`
    integer grid centered at 0.
    """
    if size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be odd and positive, got {size}")
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    half = size // 2
    d = np.arange(-half, half + 1, dtype=np.float64)
    dx, dy = np.meshgrid(d, d)
    w = np.exp(-(dx**2 + dy**2) / (2.0 * sigma**2))
    return w / w.sum()


def truncated_window(sigma: float) -> np.ndarray:
    """Truncated Gaussian window of size (4k+1) x (4k+1), std `sigma`.

    k is the largest integer strictly smaller than sigma, so integer sigma
    maps to sigma - 1. Requires sigma > 1 so that k >= 1.
    """
    if sigma <= 1:
        raise ValueError(f"window sigma must be > 1, got {sigma}")
    k = math.floor(sigma)
    if k == sigma:
        k -= 1
    return gaussian_kernel(sigma, 4 * k + 1)


def _separable_factors(kernel):
    # Rank-1 kernels (all Gaussians here) convolve as two 1-D passes.
    mid = kernel.shape[0] // 2
    pivot = kernel[mid, mid]
    if pivot <= 0:
        return None
    col = kernel[:, mid] / math.sqrt(pivot)
    row = kernel[mid, :] / math.sqrt(pivot)
    if np.allclose(np.outer(col, row), kernel, rtol=1e-12, atol=1e-15):
        return col, row
    return None


def convolve2d(field: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Convolve a 2-D field with a kernel, replicating edge samples.

    Output has the same shape as the input and is linear in the field.
    """
    field = np.asarray(field, dtype=np.float64)
    if field.ndim != 2:
        raise ValueError(f"expected 2-D field, got shape {field.shape}")
    kernel = np.asarray(kernel, dtype=np.float64)
    factors = _separable_factors(kernel)
    if factors is not None:
        col, row = factors
        tmp = ndimage.convolve1d(field, col, axis=0, mode="nearest")
        return ndimage.convolve1d(tmp, row, axis=1, mode="nearest")
    return ndimage.convolve(field, kernel, mode="nearest")


def add_gaussian_noise(img: np.ndarray, sigma_n: float, seed: int) -> np.ndarray:
    """Add i.i.d. zero-mean Gaussian noise per sample, clamped to [0, 255].

    The same seed always produces bit-identical output.
    """
    if sigma_n < 0:
        raise ValueError(f"noise sigma must be >= 0, got {sigma_n}")
    img = np.asarray(img, dtype=np.float64)
    if sigma_n == 0:
        return img.copy()
    rng = np.random.default_rng(seed)
    noisy = img + rng.normal(0.0, sigma_n, size=img.shape)
    return np.clip(noisy, 0.0, 255.0)
