import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from salseg.levelset import (
    curvature,
    dirac,
    distance_regularizer,
    heaviside,
    init_level_set,
    laplacian,
    length_force,
    mask_from_phi,
    phi_from_bytes,
    phi_to_bytes,
    region_mask,
)

NU_DEFAULT = 0.001 * 255.0 * 255.0


def circle_field(n, radius, scale=1.0):
    """phi = scale * (r - radius) on an n x n grid, centered."""
    c = (n - 1) / 2.0
    ys, xs = np.mgrid[0:n, 0:n]
    return scale * (np.hypot(xs - c, ys - c) - radius)


class TestInit:
    def test_centered_rectangle(self):
        phi = init_level_set(32, 32, {"kind": "rect", "x": 11, "y": 11, "w": 10, "h": 10}, 2.0)
        assert phi.shape == (32, 32)
        assert np.count_nonzero(phi == 2.0) == 64  # strict 8x8 interior
        assert np.count_nonzero(phi == 0.0) == 100 - 64
        assert np.count_nonzero(phi == -2.0) == 32 * 32 - 100

    def test_half_plane_mask(self):
        mask = np.zeros((16, 16), dtype=bool)
        mask[:, :8] = True
        phi = init_level_set(16, 16, mask, 3.0)
        off_boundary = phi != 0.0
        assert np.all((phi > 0)[off_boundary] == mask[off_boundary])

    def test_empty_region(self):
        with pytest.raises(ValueError):
            init_level_set(32, 32, {"kind": "disk", "cx": 16, "cy": 16, "r": 0}, 2.0)

    def test_full_region(self):
        with pytest.raises(ValueError):
            init_level_set(8, 8, np.ones((8, 8), dtype=bool), 2.0)

    def test_bad_p(self):
        with pytest.raises(ValueError):
            init_level_set(8, 8, {"kind": "disk", "cx": 4, "cy": 4, "r": 2}, 0.0)

    def test_mask_shape_mismatch(self):
        with pytest.raises(ValueError):
            region_mask(np.ones((4, 4), dtype=bool), 8, 8)


class TestHeavisideDirac:
    def test_heaviside_values(self):
        assert heaviside(0.0, 1.5) == pytest.approx(0.5)
        assert heaviside(1.5, 1.5) == pytest.approx(0.75)
        assert heaviside(-1.5, 1.5) == pytest.approx(0.25)
        assert heaviside(1e9, 1.5) == pytest.approx(1.0, abs=1e-6)

    def test_dirac_values(self):
        assert dirac(0.0, 1.5) == pytest.approx(1.0 / (1.5 * np.pi))
        assert dirac(1.5, 1.5) == pytest.approx(1.0 / (3.0 * np.pi))

    @given(st.floats(-50, 50), st.sampled_from([0.5, 1.5, 3.0]))
    def test_heaviside_complement(self, x, eps):
        assert heaviside(x, eps) + heaviside(-x, eps) == pytest.approx(1.0, abs=1e-12)

    @given(st.floats(-50, 50), st.sampled_from([0.5, 1.5, 3.0]))
    def test_dirac_even(self, x, eps):
        assert dirac(x, eps) == pytest.approx(dirac(-x, eps), abs=1e-15)

    @pytest.mark.parametrize("eps", [0.5, 1.5, 3.0])
    def test_derivative_identity(self, eps):
        # central finite difference of H matches dirac to 1e-6 on [-10, 10]
        phi = np.linspace(-10, 10, 401)
        h = 1e-4
        fd = (heaviside(phi + h, eps) - heaviside(phi - h, eps)) / (2 * h)
        assert np.max(np.abs(fd - dirac(phi, eps))) < 1e-6

    @pytest.mark.parametrize("eps", [0.5, 1.5, 3.0])
    def test_dirac_integral(self, eps):
        x = np.linspace(-50 * eps, 50 * eps, 20001)
        total = np.trapezoid(dirac(x, eps), x)
        assert 0.98 <= total <= 1.0

    def test_eps_validation(self):
        with pytest.raises(ValueError):
            heaviside(1.0, 0.0)
        with pytest.raises(ValueError):
            dirac(1.0, -1.0)


class TestCurvature:
    def test_straight_interface(self):
        ys = np.mgrid[0:32, 0:32][0].astype(float)
        phi = ys - 15.5
        k = curvature(phi)
        assert np.max(np.abs(k[2:-2, 2:-2])) < 1e-6

    def test_circle_radius(self):
        phi = circle_field(101, 20.0)
        k = curvature(phi)
        band = np.abs(phi) < 1.0
        assert np.allclose(k[band], 1.0 / 20.0, atol=0.01)

    def test_odd_under_sign_flip(self):
        rng = np.random.default_rng(11)
        phi = rng.normal(size=(24, 24))
        assert np.allclose(curvature(-phi), -curvature(phi), atol=1e-9)

    def test_first_order_convergence(self):
        errors = []
        for radius in (10.0, 20.0, 40.0):
            phi = circle_field(161, radius)
            band = np.abs(phi) < 1.0
            rel = np.abs(curvature(phi)[band] - 1.0 / radius) * radius
            errors.append(rel.mean())
        assert errors[0] > errors[1] > errors[2]
        # halving check: doubling R roughly halves the relative error
        assert errors[1] < 0.75 * errors[0]
        assert errors[2] < 0.75 * errors[1]


class TestDistanceRegularizer:
    def test_signed_distance_is_fixed_point(self):
        phi = circle_field(101, 20.0)
        force = distance_regularizer(phi)
        interior = np.zeros_like(phi, dtype=bool)
        interior[5:-5, 5:-5] = True
        interior &= np.abs(phi) > 3  # keep off the center cusp
        center = (np.mgrid[0:101, 0:101][0] - 50) ** 2 + (np.mgrid[0:101, 0:101][1] - 50) ** 2 < 9
        assert np.max(np.abs(force[interior & ~center])) < 0.05

    def test_double_slope_pushes_back(self):
        # phi = 2(r - R): laplacian = 2/r, curvature = 1/r, force = 1/r > 0
        phi = circle_field(101, 20.0, scale=2.0)
        force = distance_regularizer(phi)
        c = 50
        ys, xs = np.mgrid[0:101, 0:101]
        r = np.hypot(xs - c, ys - c)
        ring = np.abs(r - 20.0) < 4
        assert np.allclose(force[ring], 1.0 / r[ring], atol=0.02)
        assert np.all(force[ring] > 0)

    def test_constant_field(self):
        assert np.allclose(distance_regularizer(np.full((16, 16), 3.0)), 0.0)

    def test_laplacian_stencil(self):
        phi = np.zeros((5, 5))
        phi[2, 2] = 1.0
        lap = laplacian(phi)
        assert lap[2, 2] == -4.0
        assert lap[2, 1] == 1.0 and lap[1, 2] == 1.0


class TestLengthForce:
    def test_zero_weight(self):
        phi = circle_field(32, 10.0)
        assert np.array_equal(length_force(phi, 1.5, 0.0), np.zeros((32, 32)))

    def test_straight_interface(self):
        ys = np.mgrid[0:32, 0:32][0].astype(float)
        phi = ys - 15.5
        assert np.max(np.abs(length_force(phi, 1.5, NU_DEFAULT)[3:-3, 3:-3])) < 1e-3

    def test_circle_value_on_zero_set(self):
        # compose the two verified operators: nu * dirac(0-ish) * (1/R)
        phi = circle_field(101, 20.0)
        force = length_force(phi, 1.5, NU_DEFAULT)
        band = np.abs(phi) < 0.5
        expected = NU_DEFAULT * dirac(phi[band], 1.5) * (1.0 / 20.0)
        assert np.allclose(force[band], expected, atol=0.1)
        assert force[band].mean() == pytest.approx(
            NU_DEFAULT * (1 / (1.5 * np.pi)) * 0.05, abs=0.1
        )


class TestMaskAndSerialization:
    def test_mask_matches_seed_interior(self):
        seed = {"kind": "rect", "x": 4, "y": 4, "w": 8, "h": 8}
        phi = init_level_set(16, 16, seed, 2.0)
        mask = mask_from_phi(phi)
        assert mask.sum() == 36  # strict interior only
        assert not mask_from_phi(np.full((8, 8), -1.0)).any()

    def test_phi_bytes_round_trip(self):
        rng = np.random.default_rng(4)
        phi = rng.normal(size=(13, 17))
        blob = phi_to_bytes(phi)
        assert len(blob) == 8 + 13 * 17 * 8
        assert np.array_equal(phi_from_bytes(blob), phi)

    def test_phi_bytes_bad_payload(self):
        with pytest.raises(ValueError):
            phi_from_bytes(phi_to_bytes(np.zeros((4, 4)))[:-8])
