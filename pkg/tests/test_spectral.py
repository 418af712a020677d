from __future__ import annotations

import math

import numpy as np
import pytest

from morreygate.errors import OracleError, RieszRangeError, ZeroModeError
from morreygate.grid import GridFunction, GridSpec, build_grid, sample
from morreygate.models import ZeroModeRule
from morreygate.norms import lebesgue_norm
from morreygate.spectral import (
    MultiplierPolicy,
    compose_powers,
    forward_transform,
    inverse_transform,
    laplacian_power,
    lebesgue_multiplier_bound,
    multiplier,
    parseval_residual,
    quadrature_oracle,
    smoothness_order,
    split_majorant,
    unit_ball_volume,
    zero_mode_mean,
)
from morreygate.testfns import bump, gaussian, mollified_noise


class TestTransforms:
    def test_forward_matches_closed_form(self, sampled_gaussian: GridFunction, line_spec: GridSpec):
        spectrum = forward_transform(sampled_gaussian)
        exact = gaussian().transform(line_spec.frequencies())
        assert np.max(np.abs(spectrum.values - exact)) < 1e-10

    def test_inverse_undoes_forward(self, sampled_gaussian: GridFunction):
        back = inverse_transform(forward_transform(sampled_gaussian))
        assert np.max(np.abs(back.values - sampled_gaussian.values)) < 1e-12

    def test_parseval(self, sampled_gaussian: GridFunction):
        assert parseval_residual(sampled_gaussian) < 1e-12

    def test_zero_mode_mean_is_integral_over_box(self, sampled_gaussian: GridFunction):
        assert zero_mode_mean(sampled_gaussian) == pytest.approx(math.sqrt(2.0 * math.pi) / 32.0, rel=1e-10)


class TestMultiplier:
    def test_zero_mode_conventions(self, line_spec: GridSpec):
        assert multiplier(line_spec, 1.0)[0] == 0.0
        assert multiplier(line_spec, 2j)[0] == 1.0
        assert np.all(multiplier(line_spec, 0.0) == 1.0)

    def test_imaginary_power_is_unimodular(self, line_spec: GridSpec):
        assert np.allclose(np.abs(multiplier(line_spec, 3j)), 1.0)

    def test_imaginary_power_preserves_l2(self, sampled_gaussian: GridFunction):
        out = laplacian_power(sampled_gaussian, 3j)
        assert lebesgue_norm(out, 2.0) == pytest.approx(lebesgue_norm(sampled_gaussian, 2.0), rel=1e-12)


class TestLaplacianPower:
    def test_zero_power_is_identity(self, sampled_gaussian: GridFunction):
        out = laplacian_power(sampled_gaussian, 0)
        assert np.array_equal(out.values, sampled_gaussian.values)

    def test_second_power_is_minus_laplacian(self, sampled_gaussian: GridFunction, line_spec: GridSpec):
        x = line_spec.axis()
        exact = (1.0 - x**2) * np.exp(-(x**2) / 2.0)
        out = laplacian_power(sampled_gaussian, 2.0)
        assert np.max(np.abs(out.values - exact)) < 1e-10

    def test_half_power_matches_oracle(self, sampled_gaussian: GridFunction):
        # Periodic images of the |x|^{-2} tail shift the lattice value by about 3e-3.
        oracle = quadrature_oracle(gaussian(), 1.0, [[0.0]])
        out = laplacian_power(sampled_gaussian, 1.0)
        assert out.values[256].real == pytest.approx(oracle[0].real, abs=5e-3)
        assert oracle[0].real == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-9)

    def test_negative_power_below_minus_n_raises(self, sampled_gaussian: GridFunction):
        with pytest.raises(RieszRangeError):
            laplacian_power(sampled_gaussian, -1.0)

    def test_skip_error_rejects_non_zero_mean(self, plane_spec: GridSpec):
        g = sample(gaussian(sigma=1.0), plane_spec)
        policy = MultiplierPolicy(zero_mode_rule=ZeroModeRule.SKIP_ERROR)
        with pytest.raises(ZeroModeError):
            laplacian_power(g, -1.0, policy)

    def test_skip_error_accepts_mean_free_input(self, plane_spec: GridSpec):
        g = laplacian_power(sample(gaussian(sigma=1.0), plane_spec), 2.0)
        policy = MultiplierPolicy(zero_mode_rule=ZeroModeRule.SKIP_ERROR)
        out = laplacian_power(g, -1.0, policy)
        assert np.all(np.isfinite(out.values))

    def test_dropped_zero_mode_is_recorded(self, plane_spec: GridSpec):
        out = laplacian_power(sample(gaussian(), plane_spec), -1.0)
        assert "zero mode dropped" in out.provenance[-1]


class TestComposePowers:
    def test_fused_roundtrip_is_identity(self, sampled_gaussian: GridFunction):
        out = compose_powers(sampled_gaussian, 0.75, -0.75, fused=True)
        assert np.max(np.abs(out.values - sampled_gaussian.values)) < 1e-12

    def test_two_step_roundtrip_removes_the_mean(self, sampled_gaussian: GridFunction):
        out = compose_powers(sampled_gaussian, 0.5, -0.5)
        mean = zero_mode_mean(sampled_gaussian)
        assert np.max(np.abs(out.values - (sampled_gaussian.values - mean))) < 1e-10

    def test_powers_add(self, sampled_gaussian: GridFunction):
        two_step = compose_powers(sampled_gaussian, 0.5, 1.5)
        direct = laplacian_power(sampled_gaussian, 2.0)
        assert np.max(np.abs(two_step.values - direct.values)) < 1e-10


class TestMajorants:
    @pytest.mark.parametrize(("alpha", "n_dims", "expected"), [(0.5, 1, 1), (1.0, 1, 2), (0.5, 3, 2), (2.0, 2, 3)])
    def test_smoothness_order(self, alpha: float, n_dims: int, expected: int):
        assert smoothness_order(alpha, n_dims) == expected

    def test_unit_ball_volume(self):
        assert unit_ball_volume(1) == pytest.approx(2.0)
        assert unit_ball_volume(2) == pytest.approx(math.pi)
        assert unit_ball_volume(3) == pytest.approx(4.0 * math.pi / 3.0)

    def test_lattice_bound_dominates_every_intermediate_power(self, line_spec: GridSpec):
        g = sample(bump(radius=1.0), line_spec)
        bound = lebesgue_multiplier_bound(g, 1.0)
        for v in (0.0, 0.25, 0.5, 1.0):
            peak = float(np.max(laplacian_power(g, v).abs()))
            assert peak <= bound * (1.0 + 1e-10)

    def test_split_majorant_dominates(self, line_spec: GridSpec):
        g = sample(bump(radius=1.0), line_spec)
        split = split_majorant(g, 1.0)
        assert split["order"] == 2.0
        assert split["value"] == pytest.approx(split["inner"] + split["outer"])
        assert float(np.max(laplacian_power(g, 1.0).abs())) <= split["value"]


class TestQuadratureOracle:
    def test_second_power_of_gaussian(self):
        values = quadrature_oracle(gaussian(), 2.0, [[0.0], [1.5]])
        assert values[0].real == pytest.approx(1.0, rel=1e-9)
        assert values[1].real == pytest.approx((1.0 - 2.25) * math.exp(-1.125), rel=1e-8)

    def test_compact_support_has_no_oracle(self):
        with pytest.raises(OracleError):
            quadrature_oracle(bump(), 1.0, [[0.0]])

    def test_power_below_minus_n_rejected(self):
        with pytest.raises(OracleError):
            quadrature_oracle(gaussian(), -1.0, [[0.0]])


class TestOracleAgreement:
    """Lattice powers of a Gaussian against the radial quadrature, on a box wide enough to hide the images."""

    @pytest.fixture(scope="class")
    def wide_gaussian(self) -> GridFunction:
        return sample(gaussian(sigma=1.0), build_grid(1, 1048576.0, 2**21))

    @pytest.mark.parametrize("z", [0.5, 1.0, 1.5, 1j, 1 + 1j])
    def test_matches_quadrature(self, wide_gaussian: GridFunction, z: complex):
        spec = wide_gaussian.spec
        xs = np.arange(-8.0, 8.5, 1.0)
        oracle = np.asarray(quadrature_oracle(gaussian(sigma=1.0), z, [[x] for x in xs]))
        index = (spec.points_per_axis // 2 + xs / spec.spacing).astype(int)
        lattice = laplacian_power(wide_gaussian, z).values[index]
        assert np.max(np.abs(lattice - oracle)) <= 1e-4 * np.max(np.abs(oracle))


class TestImaginaryPowerIsometry:
    @pytest.mark.parametrize("seed", range(50))
    def test_noise_keeps_its_l2_norm(self, line_spec: GridSpec, seed: int):
        g = sample(mollified_noise(seed, 3.0, 1.0), line_spec)
        norm = lebesgue_norm(g, 2.0)
        for u in (-20.0, -5.0, 5.0, 20.0):
            assert lebesgue_norm(laplacian_power(g, 1j * u), 2.0) == pytest.approx(norm, rel=1e-9)


class TestSemigroup:
    @pytest.mark.parametrize("pair", range(20))
    def test_two_steps_equal_one(self, sampled_gaussian: GridFunction, pair: int):
        rng = np.random.default_rng(pair)
        z1, z2 = (complex(rng.uniform(0.0, 1.5), rng.uniform(-3.0, 3.0)) for _ in range(2))
        direct = laplacian_power(sampled_gaussian, z1 + z2)
        two_step = compose_powers(sampled_gaussian, z1, z2)
        gap = np.linalg.norm(two_step.values - direct.values) / np.linalg.norm(direct.values)
        assert gap <= 1e-10
