import json

import numpy as np
import pytest
from scipy import ndimage

from salseg.synth import BiasSpec, SceneSpec, ShapeSpec, make_synthetic, shape_mask


def six_blob_spec(intensities=(40.0, 80.0, 120.0, 160.0, 200.0, 240.0)):
    centers = [(24, 26), (64, 26), (104, 26), (24, 70), (64, 70), (104, 70)]
    return SceneSpec(
        width=128,
        height=96,
        background=0.0,
        shapes=[
            ShapeSpec("disk", {"cx": cx, "cy": cy, "r": 11}, v)
            for (cx, cy), v in zip(centers, intensities)
        ],
    )


def test_disk_mask_matches_rendered_area():
    spec = SceneSpec(32, 32, 50.0, [ShapeSpec("disk", {"cx": 16, "cy": 16, "r": 7}, 200.0)])
    img, mask = make_synthetic(spec)
    assert mask.sum() == (img == 200.0).sum()
    assert np.all(img[~mask] == 50.0)


def test_six_blobs_have_six_components():
    _, mask = make_synthetic(six_blob_spec())
    _, n = ndimage.label(mask)
    assert n == 6


def test_bias_field_adds_intra_blob_variance():
    # intensities low enough that the ramp never clips at 255
    spec = six_blob_spec(intensities=(40.0, 60.0, 80.0, 100.0, 120.0, 140.0))
    flat_img, mask = make_synthetic(spec)
    spec.bias = BiasSpec(kind="ramp", amplitude=0.3, params={"direction": (1.0, 0.3)})
    biased_img, biased_mask = make_synthetic(spec)
    assert np.array_equal(mask, biased_mask)
    labels, n = ndimage.label(mask)
    for i in range(1, n + 1):
        blob = biased_img[labels == i]
        assert blob.var() > 0
        assert flat_img[labels == i].var() == 0


def test_bump_bias():
    spec = SceneSpec(
        32, 32, 100.0,
        [ShapeSpec("rect", {"x": 4, "y": 4, "w": 24, "h": 24}, 150.0)],
        bias=BiasSpec(kind="bump", amplitude=0.4, params={"sigma": 8.0}),
    )
    img, _ = make_synthetic(spec)
    assert img[16, 16] > img[5, 5]

def test_zero_shapes_rejected():
    with pytest.raises(ValueError):
        make_synthetic(SceneSpec(32, 32, 0.0, []))


def test_later_shape_wins_on_overlap():
    spec = SceneSpec(
        24, 24, 0.0,
        [
            ShapeSpec("rect", {"x": 2, "y": 2, "w": 12, "h": 12}, 100.0),
            ShapeSpec("rect", {"x": 8, "y": 8, "w": 12, "h": 12}, 200.0),
        ],
    )
    img, mask = make_synthetic(spec)
    assert img[10, 10] == 200.0
    assert img[4, 4] == 100.0
    assert mask.sum() == 2 * 144 - 36


def test_star_mask_is_star_shaped():
    m = shape_mask("star", {"cx": 32, "cy": 32, "r_outer": 20, "r_inner": 8, "points": 5}, 64, 64)
    assert m[32, 32]
    # tips reach farther than the inner radius along the first spike (pointing up)
    assert m[32 - 18, 32]
    assert not m[0, 0]
    inner_disk = shape_mask("disk", {"cx": 32, "cy": 32, "r": 7}, 64, 64)
    assert np.all(m[inner_disk])


def test_unknown_shape_kind():
    with pytest.raises(ValueError):
        shape_mask("triangle", {}, 8, 8)


def test_json_round_trip():
    spec = six_blob_spec()
    spec.bias = BiasSpec(kind="ramp", amplitude=0.25, params={"direction": (0.0, 1.0)})
    restored = SceneSpec.from_json(json.dumps(spec.to_dict()))
    img_a, mask_a = make_synthetic(spec)
    img_b, mask_b = make_synthetic(restored)
    assert np.array_equal(img_a, img_b)
    assert np.array_equal(mask_a, mask_b)
