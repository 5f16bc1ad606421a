"""Level-set embedding, smoothed step calculus and the shared force terms.

The embedding phi is a float64 (H, W) array whose zero crossing is the
contour; phi > 0 marks the inside region. Initialization is piecewise
constant (+p inside, 0 on the seed boundary, -p outside); the distance
regularizing force keeps the evolution stable without reinitialization.
All stencils use unit spacing, central differences and replicated edges.
"""

from __future__ import annotations

import struct

import numpy as np
from scipy import ndimage

from .synth import shape_mask

__all__ = [
    "init_level_set",
    "region_mask",
    "heaviside",
    "dirac",
    "curvature",
    "laplacian",
    "distance_regularizer",
    "length_force",
    "mask_from_phi",
    "phi_to_bytes",
    "phi_from_bytes",
]

GRAD_FLOOR = 1e-10


def heaviside(phi, eps: float):
    """Smoothed unit step 0.5 * (1 + (2/pi) * arctan(phi / eps))."""
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    return 0.5 * (1.0 + (2.0 / np.pi) * np.arctan(np.asarray(phi, dtype=np.float64) / eps))


def dirac(phi, eps: float):
    """Smoothed impulse eps / (pi * (phi^2 + eps^2)), the derivative of heaviside."""
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    phi = np.asarray(phi, dtype=np.float64)
    return eps / (np.pi * (phi**2 + eps**2))


def _pad(a):
    return np.pad(a, 1, mode="edge")


def _grad_central(a):
    p = _pad(a)
    gx = (p[1:-1, 2:] - p[1:-1, :-2]) / 2.0
    gy = (p[2:, 1:-1] - p[:-2, 1:-1]) / 2.0
    return gx, gy


def laplacian(phi: np.ndarray) -> np.ndarray:
    """5-point Laplacian with replicated boundaries."""
    p = _pad(np.asarray(phi, dtype=np.float64))
    return p[1:-1, 2:] + p[1:-1, :-2] + p[2:, 1:-1] + p[:-2, 1:-1] - 4.0 * phi


def curvature(phi: np.ndarray) -> np.ndarray:
    """div(grad phi / |grad phi|) with the gradient magnitude floored at 1e-10."""
    phi = np.asarray(phi, dtype=np.float64)
    gx, gy = _grad_central(phi)
    mag = np.sqrt(gx**2 + gy**2)
    mag = np.maximum(mag, GRAD_FLOOR)
    nx = gx / mag
    ny = gy / mag
    dnx_dx, _ = _grad_central(nx)
    _, dny_dy = _grad_central(ny)
    return dnx_dx + dny_dy


def distance_regularizer(phi: np.ndarray) -> np.ndarray:
    """Force pushing |grad phi| toward 1: Laplacian(phi) - curvature(phi).

    Vanishes when phi is a signed distance function, which removes the
    need for explicit reinitialization.
    """
    return laplacian(phi) - curvature(phi)


def length_force(phi: np.ndarray, eps: float, nu: float) -> np.ndarray:
    """Contour-length penalty force nu * dirac(phi) * curvature(phi)."""
    if nu == 0:
        return np.zeros_like(np.asarray(phi, dtype=np.float64))
    return nu * dirac(phi, eps) * curvature(phi)


def mask_from_phi(phi: np.ndarray) -> np.ndarray:
    """Foreground mask: phi > 0."""
    return np.asarray(phi) > 0


def region_mask(seed_region, width: int, height: int) -> np.ndarray:
    """Resolve a seed-region spec to a boolean mask.

    Accepts a boolean array of matching shape or a dict
    {"kind": "rect"|"disk"|"star"|"mask", ...} with the shape parameters
    used by the synthetic generator ("mask" carries the array itself).
    """
    if isinstance(seed_region, np.ndarray):
        if seed_region.shape != (height, width):
            raise ValueError(
                f"seed mask shape {seed_region.shape} does not match grid "
                f"({height}, {width})"
            )
        return seed_region.astype(bool)
    if isinstance(seed_region, dict):
        kind = seed_region.get("kind")
        if kind == "mask":
            return region_mask(np.asarray(seed_region["mask"]), width, height)
        params = {k: v for k, v in seed_region.items() if k != "kind"}
        return shape_mask(kind, params, width, height)
    raise ValueError(f"unsupported seed region spec: {seed_region!r}")


def init_level_set(width: int, height: int, seed_region, p: float) -> np.ndarray:
    """Piecewise-constant initialization from a seed region.

    phi = +p strictly inside the seed, 0 on the seed's (4-connected inner)
    boundary pixels and -p everywhere outside.
    """
    if p <= 0:
        raise ValueError(f"p must be > 0, got {p}")
    if width < 3 or height < 3:
        raise ValueError("grid must be at least 3x3")
    mask = region_mask(seed_region, width, height)
    n_in = int(mask.sum())
    if n_in == 0:
        raise ValueError("seed region is empty")
    if n_in == mask.size:
        raise ValueError("seed region covers the whole grid")
    # border_value=0 marks pixels at the image edge as boundary too
    interior = ndimage.binary_erosion(
        mask, structure=np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]]), border_value=0
    )
    phi = np.full((height, width), -float(p))
    phi[mask] = 0.0
    phi[interior] = float(p)
    return phi


def phi_to_bytes(phi: np.ndarray) -> bytes:
    """Serialize phi as an 8-byte little-endian (width, height) header plus
    row-major float64 samples."""
    phi = np.asarray(phi, dtype=np.float64)
    h, w = phi.shape
    return struct.pack("<II", w, h) + phi.astype("<f8").tobytes()


def phi_from_bytes(blob: bytes) -> np.ndarray:
    w, h = struct.unpack("<II", blob[:8])
    phi = np.frombuffer(blob[8:], dtype="<f8")
    if phi.size != w * h:
        raise ValueError(f"payload holds {phi.size} samples, header says {w}x{h}")
    return phi.reshape(h, w).astype(np.float64)
