import numpy as np
import pytest

from salseg.metrics import dice
from salseg.models import ModelParams
from salseg.pipeline import prepare_model_inputs, segment_raster
from salseg.raster import srgb_to_lab, to_grayscale
from salseg.saliency import saliency_color, saliency_gray
from salseg.synth import SceneSpec, ShapeSpec, make_synthetic


def color_scene():
    img = np.zeros((32, 32, 3))
    img[:, :, 2] = 60.0
    disk = (np.mgrid[0:32, 0:32][0] - 16) ** 2 + (np.mgrid[0:32, 0:32][1] - 16) ** 2 <= 81
    img[disk] = (220.0, 60.0, 40.0)
    return img, disk


def test_gray_model_on_color_input():
    img, _ = color_scene()
    work, sal = prepare_model_inputs(img, "cv")
    assert sal is None
    assert np.array_equal(work, to_grayscale(img))


def test_saliency_models_get_lab_and_preset():
    img, _ = color_scene()
    work, sal = prepare_model_inputs(img, "proposed")
    assert work.shape == (32, 32, 3)
    assert np.array_equal(work, srgb_to_lab(img))
    assert np.array_equal(sal, saliency_color(srgb_to_lab(img), 0.5, 5))
    _, sal_sdrel = prepare_model_inputs(img, "sdrel")
    assert np.array_equal(sal_sdrel, saliency_color(srgb_to_lab(img), 0.8, 3))


def test_force_gray_flag():
    img, _ = color_scene()
    work, sal = prepare_model_inputs(img, "proposed", force_gray=True)
    assert work.ndim == 2
    assert np.array_equal(sal, saliency_gray(to_grayscale(img), 0.5, 5))


def test_gray_input_passthrough():
    gray = np.full((16, 16), 80.0)
    work, sal = prepare_model_inputs(gray, "sdrel")
    assert work is gray or np.array_equal(work, gray)
    assert np.array_equal(sal, saliency_gray(gray, 0.8, 3))


def test_unknown_model():
    with pytest.raises(ValueError):
        prepare_model_inputs(np.zeros((8, 8)), "snake")


def test_segment_raster_two_phase():
    spec = SceneSpec(48, 48, 40.0, [ShapeSpec("disk", {"cx": 24, "cy": 24, "r": 12}, 210.0)])
    img, gt = make_synthetic(spec)
    result = segment_raster(
        img, "cv", {"kind": "disk", "cx": 24, "cy": 24, "r": 17}, ModelParams(max_iters=200)
    )
    assert dice(result.trace.mask, gt) >= 0.99
    assert result.saliency is None
    assert result.phi0.shape == (48, 48)


def test_segment_raster_color_proposed_runs():
    img, gt = color_scene()
    result = segment_raster(
        img, "proposed", {"kind": "disk", "cx": 16, "cy": 16, "r": 12},
        ModelParams(max_iters=60),
    )
    assert result.trace.mask.shape == (32, 32)
    assert result.saliency is not None
    assert np.isfinite(result.trace.phi).all()
