import math

import numpy as np
import pytest

from salseg.raster import gaussian_kernel, srgb_to_lab
from salseg.saliency import (
    SALIENCY_PRESETS,
    normalize_saliency,
    saliency_color,
    saliency_gray,
)


def test_constant_image_is_exactly_zero():
    s = saliency_gray(np.full((32, 32), 77.0))
    assert np.array_equal(s, np.zeros((32, 32)))


def test_single_bright_pixel_hand_values():
    # 33x33 zeros, center 255: far corners get |mean - 0|, the center
    # |mean - 255 * w00| with w00 the center weight of the 0.5/5 kernel
    img = np.zeros((33, 33))
    img[16, 16] = 255.0
    s = saliency_gray(img, sigma=0.5, ksize=5, normalized=False)
    mean = 255.0 / (33 * 33)
    assert s[0, 0] == pytest.approx(mean, abs=1e-9)
    w00 = gaussian_kernel(0.5, 5)[2, 2]
    assert s[16, 16] == pytest.approx(abs(mean - 255.0 * w00), abs=1e-9)
    # one off-center tap of the kernel as well
    w01 = gaussian_kernel(0.5, 5)[2, 3]
    assert s[16, 17] == pytest.approx(abs(mean - 255.0 * w01), abs=1e-9)


def test_transpose_symmetric_input():
    rng = np.random.default_rng(0)
    half = rng.uniform(0, 255, size=(16, 16))
    img = (half + half.T) / 2.0  # symmetric under transpose
    s = saliency_gray(img)
    assert np.allclose(s, s.T, atol=1e-9)


def test_translation_invariance_on_periodic_pattern():
    xs = np.arange(64)
    img = 128.0 + 100.0 * np.sin(2 * np.pi * xs / 8.0)
    img = np.tile(img, (64, 1))
    shifted = np.roll(img, 3, axis=1)
    a = saliency_gray(img, normalized=False)
    b = saliency_gray(shifted, normalized=False)
    core = slice(2 * 5, -2 * 5)
    assert np.allclose(np.roll(a, 3, axis=1)[core, core], b[core, core], atol=1e-9)


def test_normalization_idempotent_and_range():
    rng = np.random.default_rng(1)
    s = normalize_saliency(rng.uniform(0, 10, size=(16, 16)))
    assert s.min() >= 0.0
    assert s.max() == pytest.approx(255.0)
    assert np.array_equal(normalize_saliency(s), s)
    assert np.array_equal(normalize_saliency(np.zeros((4, 4))), np.zeros((4, 4)))


def test_sdrel_preset_differs():
    rng = np.random.default_rng(2)
    img = rng.uniform(0, 255, size=(24, 24))
    sig_p, k_p = SALIENCY_PRESETS["proposed"]
    sig_s, k_s = SALIENCY_PRESETS["sdrel"]
    assert (sig_p, k_p) == (0.5, 5)
    assert (sig_s, k_s) == (0.8, 3)
    assert not np.allclose(
        saliency_gray(img, sig_p, k_p, normalized=False),
        saliency_gray(img, sig_s, k_s, normalized=False),
    )


class TestColor:
    def test_constant_color(self):
        lab = srgb_to_lab(np.full((16, 16, 3), 200.0))
        assert np.array_equal(saliency_color(lab), np.zeros((16, 16)))

    def test_l_only_matches_gray(self):
        rng = np.random.default_rng(3)
        lab = np.zeros((16, 16, 3))
        lab[:, :, 0] = rng.uniform(0, 100, size=(16, 16))
        from_color = saliency_color(lab, normalized=False)
        from_gray = saliency_gray(lab[:, :, 0], normalized=False)
        assert np.allclose(from_color, from_gray, atol=1e-12)

    def test_two_tone_euclidean_oracle(self):
        # brute-force re-evaluation: per-pixel distance between the mean Lab
        # vector and the blurred Lab vector
        rng = np.random.default_rng(4)
        img = np.zeros((20, 20, 3))
        img[:, :10] = (250.0, 40.0, 40.0)
        img[:, 10:] = (30.0, 90.0, 200.0)
        lab = srgb_to_lab(img)
        got = saliency_color(lab, normalized=False)

        kernel = gaussian_kernel(0.5, 5)
        mean_vec = lab.reshape(-1, 3).mean(axis=0)
        expected = np.zeros((20, 20))
        for y in range(20):
            for x in range(20):
                acc = np.zeros(3)
                for dy in range(-2, 3):
                    for dx in range(-2, 3):
                        yy = min(max(y - dy, 0), 19)
                        xx = min(max(x - dx, 0), 19)
                        acc += kernel[dy + 2, dx + 2] * lab[yy, xx]
                expected[y, x] = math.dist(mean_vec, acc)
        assert np.allclose(got, expected, atol=1e-9)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            saliency_color(np.zeros((8, 8)))
        with pytest.raises(ValueError):
            saliency_gray(np.zeros((8, 8, 3)))
