"""Synthetic test scenes with exact ground-truth masks.

A scene is a JSON-serializable spec: canvas size, background intensity, a
list of shapes (disk, rectangle, star polygon) each with its own intensity,
and an optional smooth multiplicative bias field that models intensity
inhomogeneity. Shapes are rendered in order, later shapes win on overlap;
the ground-truth mask is the union of all shapes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["ShapeSpec", "BiasSpec", "SceneSpec", "make_synthetic", "shape_mask"]


@dataclass
class ShapeSpec:
    kind: str  # "disk" | "rect" | "star"
    params: dict
    intensity: float


@dataclass
class BiasSpec:
    kind: str  # "ramp" | "bump"
    amplitude: float
    params: dict = field(default_factory=dict)


@dataclass
class SceneSpec:
    width: int
    height: int
    background: float
    shapes: list[ShapeSpec]
    bias: BiasSpec | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "SceneSpec":
        shapes = [
            ShapeSpec(kind=s["kind"], params=s.get("params", {}), intensity=s["intensity"])
            for s in d.get("shapes", [])
        ]
        bias = None
        if d.get("bias"):
            b = dict(d["bias"])
            bias = BiasSpec(kind=b.pop("kind"), amplitude=b.pop("amplitude"), params=b)
        return cls(
            width=int(d["width"]),
            height=int(d["height"]),
            background=float(d.get("background", 0.0)),
            shapes=shapes,
            bias=bias,
        )

    @classmethod
    def from_json(cls, text: str) -> "SceneSpec":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        d = {
            "width": self.width,
            "height": self.height,
            "background": self.background,
            "shapes": [
                {"kind": s.kind, "params": s.params, "intensity": s.intensity}
                for s in self.shapes
            ],
        }
        if self.bias is not None:
            d["bias"] = {"kind": self.bias.kind, "amplitude": self.bias.amplitude,
                         **self.bias.params}
        return d


def _grid(width, height):
    ys, xs = np.mgrid[0:height, 0:width]
    return xs.astype(np.float64), ys.astype(np.float64)


def _star_vertices(cx, cy, r_outer, r_inner, points, rotation):
    angles = rotation + np.arange(2 * points) * np.pi / points
    radii = np.where(np.arange(2 * points) % 2 == 0, r_outer, r_inner)
    return np.stack([cx + radii * np.cos(angles), cy + radii * np.sin(angles)], axis=1)


def _polygon_mask(width, height, verts):
    # even-odd ray casting over pixel centers
    xs, ys = _grid(width, height)
    inside = np.zeros((height, width), dtype=bool)
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        if y0 == y1:
            continue
        crosses = (ys < y0) != (ys < y1)
        x_cross = x0 + (ys - y0) / (y1 - y0) * (x1 - x0)
        inside ^= crosses & (xs < x_cross)
    return inside


def shape_mask(kind: str, params: dict, width: int, height: int) -> np.ndarray:
    """Rasterize one shape to a boolean mask over pixel centers."""
    xs, ys = _grid(width, height)
    if kind == "disk":
        cx, cy, r = params["cx"], params["cy"], params["r"]
        if r <= 0:
            return np.zeros((height, width), dtype=bool)
        return (xs - cx) ** 2 + (ys - cy) ** 2 <= r**2
    if kind == "rect":
        x, y, w, h = params["x"], params["y"], params["w"], params["h"]
        return (xs >= x) & (xs < x + w) & (ys >= y) & (ys < y + h)
    if kind == "star":
        verts = _star_vertices(
            params["cx"],
            params["cy"],
            params["r_outer"],
            params["r_inner"],
            int(params.get("points", 5)),
            float(params.get("rotation", -np.pi / 2)),
        )
        return _polygon_mask(width, height, verts)
    raise ValueError(f"unknown shape kind {kind!r} (expected disk, rect or star)")


def _bias_field(bias: BiasSpec, width: int, height: int) -> np.ndarray:
    xs, ys = _grid(width, height)
    if bias.kind == "ramp":
        dx, dy = bias.params.get("direction", (1.0, 0.0))
        norm = np.hypot(dx, dy) or 1.0
        u = (xs / max(width - 1, 1) - 0.5) * (dx / norm) + (
            ys / max(height - 1, 1) - 0.5
        ) * (dy / norm)
        return 1.0 + 2.0 * bias.amplitude * u
    if bias.kind == "bump":
        cx = bias.params.get("cx", (width - 1) / 2.0)
        cy = bias.params.get("cy", (height - 1) / 2.0)
        s = bias.params.get("sigma", min(width, height) / 3.0)
        return 1.0 + bias.amplitude * np.exp(
            -((xs - cx) ** 2 + (ys - cy) ** 2) / (2.0 * s**2)
        )
    raise ValueError(f"unknown bias kind {bias.kind!r} (expected ramp or bump)")


def make_synthetic(spec: SceneSpec) -> tuple[np.ndarray, np.ndarray]:
    """Render a scene to (image, ground-truth mask).

    Later shapes overwrite earlier ones where they overlap; the mask is the
    union of all shapes. The bias field, when present, multiplies the whole
    image before clamping to [0, 255].
    """
    if spec.width < 3 or spec.height < 3:
        raise ValueError("scene must be at least 3x3")
    if not spec.shapes:
        raise ValueError("scene needs at least one shape")
    img = np.full((spec.height, spec.width), float(spec.background))
    gt = np.zeros((spec.height, spec.width), dtype=bool)
    for shape in spec.shapes:
        m = shape_mask(shape.kind, shape.params, spec.width, spec.height)
        img[m] = shape.intensity
        gt |= m
    if spec.bias is not None:
        img = np.clip(img * _bias_field(spec.bias, spec.width, spec.height), 0.0, 255.0)
    return img, gt
