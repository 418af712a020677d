from __future__ import annotations

import pytest

from morreygate.errors import ExponentError, HypothesisError
from morreygate.exponents import (
    dilation_exponents,
    interpolation_route,
    validate_hardy,
    validate_heisenberg,
    validate_heisenberg_small,
    validate_interpolation,
    validate_iu_bound,
    validate_olsen,
)
from morreygate.models import TheoremTag


class TestImaginaryPowerBound:
    def test_valid_pair(self):
        tup = validate_iu_bound(2.0, 4.0, 1)
        assert tup.theorem_tag == TheoremTag.IU_BOUND
        assert dilation_exponents(tup) == (-0.25, -0.25)
        assert tup.dilation_residual == 0.0

    @pytest.mark.parametrize(("p", "q", "n"), [(1.0, 2.0, 1), (3.0, 2.0, 1), (2.0, 4.0, 4)])
    def test_rejected(self, p: float, q: float, n: int):
        with pytest.raises(HypothesisError):
            validate_iu_bound(p, q, n)

    def test_error_names_the_relation(self):
        with pytest.raises(HypothesisError) as exc:
            validate_iu_bound(1.0, 2.0, 1)
        assert exc.value.relation == "1 < p <= q < inf"


class TestInterpolation:
    def test_interior_theta(self):
        tup = validate_interpolation(2.0, 4.0, 4.0, 8.0, 0.5, alpha=1.0, n=1)
        assert tup["p"] == pytest.approx(8.0 / 3.0)
        assert tup["q"] == pytest.approx(16.0 / 3.0)
        lhs, rhs = dilation_exponents(tup)
        assert lhs == pytest.approx(rhs)

    def test_endpoint_flags(self):
        tup = validate_interpolation(2.0, 4.0, 4.0, 8.0, 0.0)
        assert tup["p"] == 2.0
        assert "endpoint-theta-0" in tup.flags
        assert "endpoint-theta-1" in validate_interpolation(2.0, 4.0, 4.0, 8.0, 1.0).flags

    def test_theta_out_of_range(self):
        with pytest.raises(HypothesisError):
            validate_interpolation(2.0, 4.0, 4.0, 8.0, 1.5)

    def test_without_dimension_has_no_dilation_exponents(self):
        tup = validate_interpolation(2.0, 4.0, 4.0, 8.0, 0.5)
        with pytest.raises(ExponentError):
            dilation_exponents(tup)


class TestOlsen:
    def test_derived_exponents(self):
        tup = validate_olsen(1.5, 3.0, 0.25, 1)
        assert tup["u"] == pytest.approx(2.0)
        assert tup["v"] == pytest.approx(4.0)
        assert tup["s"] == pytest.approx(6.0)
        assert tup["t"] == pytest.approx(12.0)

    def test_q_must_stay_below_n_over_alpha(self):
        with pytest.raises(HypothesisError):
            validate_olsen(2.0, 4.0, 0.25, 1)

    def test_alpha_range(self):
        with pytest.raises(HypothesisError):
            validate_olsen(1.5, 3.0, 1.0, 1)


class TestHardy:
    def test_derived_exponents(self):
        tup = validate_hardy(2.0, 4.0, 0.2, 1)
        assert tup["t"] == pytest.approx(20.0)
        assert tup["u"] == pytest.approx(2.5)
        assert tup["v"] == pytest.approx(5.0)
        assert dilation_exponents(tup)[0] == pytest.approx(-0.05)

    def test_alpha_at_n_over_q_rejected(self):
        with pytest.raises(HypothesisError) as exc:
            validate_hardy(2.0, 4.0, 0.25, 1)
        assert exc.value.relation == "0 < alpha < n/q"


class TestHeisenberg:
    def test_symmetric_l2_tuple(self):
        tup = validate_heisenberg_small(2.0, 2.0, 2.0, 2.0, 1.0, 0.25, 1)
        assert tup.theorem_tag == TheoremTag.HEISENBERG_SMALL
        assert tup["p0"] == pytest.approx(2.0)
        assert tup["q0"] == pytest.approx(2.0)
        lhs, rhs = dilation_exponents(tup)
        assert lhs == pytest.approx(-0.5)
        assert rhs == pytest.approx(-0.5)

    def test_gamma_at_boundary_rejected(self):
        with pytest.raises(HypothesisError):
            validate_heisenberg_small(2.0, 2.0, 2.0, 2.0, 1.0, 0.5, 1)

    def test_p2_endpoint_flag(self):
        tup = validate_heisenberg_small(2.0, 2.0, 1.0, 2.0, 1.0, 0.25, 1)
        assert "endpoint-p2-one" in tup.flags
        assert tup["p0"] == pytest.approx(5.0 / 3.0)

    def test_large_delta_takes_the_interpolation_route(self):
        tup = validate_heisenberg(2.0, 2.0, 2.0, 2.0, 1.0, 2.0, 1)
        assert "interpolation-route" in tup.flags
        route = interpolation_route(tup)
        assert route["theta"] == pytest.approx(0.125)
        assert route["gamma"] == pytest.approx(0.25)
        assert route["q"] == pytest.approx(2.0)
        assert route["gamma"] < 1 / route["q"]

    def test_small_delta_is_not_flagged(self):
        tup = validate_heisenberg(2.0, 2.0, 2.0, 2.0, 1.0, 0.25, 1)
        assert "interpolation-route" not in tup.flags

    def test_route_needs_a_general_tuple(self):
        with pytest.raises(ExponentError):
            interpolation_route(validate_iu_bound(2.0, 4.0, 1))

    def test_delta_must_be_positive(self):
        with pytest.raises(HypothesisError):
            validate_heisenberg(2.0, 2.0, 2.0, 2.0, 1.0, 0.0, 1)
