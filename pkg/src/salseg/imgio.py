"""File I/O: 8-bit PNG and binary PGM rasters, level-set dumps, overlays.

All writers go through a temp-file + rename so partially written artifacts
never appear under their final name.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np
from PIL import Image

from .levelset import phi_to_bytes

__all__ = [
    "read_image",
    "write_png",
    "write_pgm",
    "read_pgm",
    "write_mask_png",
    "write_phi_pgm",
    "write_phi_raw",
    "contour_pixels",
    "draw_overlay",
    "atomic_write_bytes",
]


def atomic_write_bytes(path, data: bytes) -> None:
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _to_uint8(img):
    return np.clip(np.rint(np.asarray(img, dtype=np.float64)), 0, 255).astype(np.uint8)


def read_image(path) -> np.ndarray:
    """Load a PNG or PGM file as a float64 raster in [0, 255].

    Grayscale files come back as (H, W); color as (H, W, 3). Palette and
    alpha images are converted to plain RGB.
    """
    path = os.fspath(path)
    if path.lower().endswith(".pgm"):
        return read_pgm(path)
    with Image.open(path) as im:
        if im.mode in ("L", "I;16", "I"):
            im = im.convert("L")
        elif im.mode != "RGB":
            im = im.convert("RGB")
        return np.asarray(im, dtype=np.float64)


def write_png(img, path) -> None:
    """Write a raster (values rounded and clipped to 8-bit) as PNG."""
    arr = _to_uint8(img)
    mode = "L" if arr.ndim == 2 else "RGB"
    import io

    buf = io.BytesIO()
    Image.fromarray(arr, mode=mode).save(buf, format="PNG")
    atomic_write_bytes(path, buf.getvalue())


def write_mask_png(mask, path) -> None:
    write_png(np.asarray(mask, dtype=np.uint8) * 255, path)


def write_pgm(img, path) -> None:
    """Write a single-channel raster as binary PGM (P5, maxval 255)."""
    arr = _to_uint8(img)
    if arr.ndim != 2:
        raise ValueError(f"PGM holds single-channel data, got shape {arr.shape}")
    h, w = arr.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    atomic_write_bytes(path, header + arr.tobytes())


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    fields = []
    pos = 0
    while len(fields) < 4:
        # skip whitespace and '#' comment lines between header tokens
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while end < len(data) and not data[end : end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    if fields[0] != b"P5":
        raise ValueError(f"not a binary PGM file: magic {fields[0]!r}")
    w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval > 255:
        raise ValueError("only 8-bit PGM is supported")
    pos += 1  # single whitespace after maxval
    raw = np.frombuffer(data, dtype=np.uint8, count=w * h, offset=pos)
    return raw.reshape(h, w).astype(np.float64)


def write_phi_pgm(phi, path) -> None:
    """Export a level set as PGM, affinely rescaled to the 8-bit range."""
    phi = np.asarray(phi, dtype=np.float64)
    lo, hi = phi.min(), phi.max()
    scaled = np.full_like(phi, 128.0) if hi == lo else (phi - lo) * (255.0 / (hi - lo))
    write_pgm(scaled, path)


def write_phi_raw(phi, path) -> None:
    """Export a level set as raw little-endian doubles with a width/height header."""
    atomic_write_bytes(path, phi_to_bytes(phi))


def contour_pixels(phi) -> np.ndarray:
    """Pixels whose sign differs from any 4-neighbor: the rasterized zero level set."""
    pos = np.asarray(phi) > 0
    edge = np.zeros_like(pos)
    edge[:, 1:] |= pos[:, 1:] != pos[:, :-1]
    edge[:, :-1] |= pos[:, :-1] != pos[:, 1:]
    edge[1:, :] |= pos[1:, :] != pos[:-1, :]
    edge[:-1, :] |= pos[:-1, :] != pos[1:, :]
    return edge


def draw_overlay(img, phi, color=(255, 0, 0)) -> np.ndarray:
    """Paint the zero level set onto a copy of the image (returned as RGB)."""
    img = np.asarray(img, dtype=np.float64)
    rgb = np.stack([img] * 3, axis=-1) if img.ndim == 2 else img.copy()
    rgb[contour_pixels(phi)] = color
    return rgb
