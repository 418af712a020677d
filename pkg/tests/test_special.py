from __future__ import annotations

import math

import numpy as np
import pytest

from morreygate.errors import PoleError, RieszRangeError
from morreygate.special import (
    calibrate_riesz_constant,
    complex_gamma,
    gamma_identity_residuals,
    kernel_constant,
    kernel_constant_bound_exponent,
    kernel_constant_magnitudes,
    riesz_constant,
    strip_points,
)


class TestComplexGamma:
    @pytest.mark.parametrize(
        ("z", "expected"),
        [
            (1.0, 1.0),
            (5.0, 24.0),
            (0.5, math.sqrt(math.pi)),
            (-0.5, -2.0 * math.sqrt(math.pi)),
        ],
    )
    def test_real_values(self, z: float, expected: float):
        assert complex(complex_gamma(z)) == pytest.approx(expected, rel=1e-13)

    def test_modulus_on_imaginary_axis(self):
        value = complex(complex_gamma(1j))
        assert abs(value) ** 2 == pytest.approx(math.pi / math.sinh(math.pi), rel=1e-13)

    @pytest.mark.parametrize("z", [0.0, -1.0, -4.0])
    def test_poles_raise(self, z: float):
        with pytest.raises(PoleError):
            complex_gamma(z)

    def test_array_input_returns_array(self):
        out = complex_gamma(np.array([1.0, 2.0, 3.0]))
        assert isinstance(out, np.ndarray)
        assert np.allclose(out, [1.0, 1.0, 2.0])

    def test_identities_on_strip(self):
        residuals = gamma_identity_residuals(strip_points(40, seed=3))
        assert residuals["recurrence"] < 1e-10
        assert residuals["conjugate"] < 1e-10

    def test_strip_points_are_deterministic(self):
        assert np.array_equal(strip_points(10, 5), strip_points(10, 5))
        assert not np.array_equal(strip_points(10, 5), strip_points(10, 6))


class TestKernelConstant:
    def test_vanishes_at_zero(self):
        assert kernel_constant(0.0, 2).value == 0j

    def test_modulus_is_even_in_u(self):
        assert kernel_constant(-7.5, 3).magnitude == pytest.approx(kernel_constant(7.5, 3).magnitude, rel=1e-10)

    @pytest.mark.parametrize("n_dims", [1, 2, 3])
    def test_growth_exponent_is_half_the_dimension(self, n_dims: int):
        assert kernel_constant_bound_exponent(n_dims) == pytest.approx(n_dims / 2.0, abs=0.1)

    def test_magnitudes_vectorised(self):
        mags = kernel_constant_magnitudes([1.0, 10.0], 1)
        assert mags.shape == (2,)
        assert mags[1] > mags[0]


class TestRieszConstant:
    def test_newton_kernel_in_three_dimensions(self):
        # (-Delta)^{-1} in R^3 has kernel 1 / (4 pi |x|)
        assert riesz_constant(2.0, 3) == pytest.approx(4.0 * math.pi, rel=1e-12)

    @pytest.mark.parametrize(("alpha", "n_dims"), [(0.0, 1), (1.0, 1), (3.5, 3)])
    def test_out_of_range(self, alpha: float, n_dims: int):
        with pytest.raises(RieszRangeError):
            riesz_constant(alpha, n_dims)

    @pytest.mark.parametrize(("alpha", "n_dims"), [(0.5, 1), (1.0, 2), (1.5, 3)])
    def test_spatial_and_spectral_routes_agree(self, alpha: float, n_dims: int):
        result = calibrate_riesz_constant(alpha, n_dims)
        assert result["relative_error"] < 1e-6

    def test_plane_value_at_origin(self):
        # I_1 of exp(-|x|^2/2) at 0 in R^2 is sqrt(pi/2)
        result = calibrate_riesz_constant(1.0, 2)
        assert result["spectral"] == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-10)
