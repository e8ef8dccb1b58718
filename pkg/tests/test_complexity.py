"""Tests for the complexity-theory module.

Expected values marked "frozen" were computed with the independent oracles in
this file (adaptive quadrature, series evaluation) and then hard-coded.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from glasslab import complexity as cx
from glasslab.errors import DomainError, InvalidOrderError

# frozen: (2/E^2) * quad(sqrt(t^2-E^2), -2, -E) with E = energy_barrier(3)
RATE_AT_MINUS_2_H3 = 0.2075464553220303
# frozen: quad(sqrt(|x^2-2|), sqrt(2), 2)
EDGE_INTEGRAL_AT_2 = 0.5328399753535519
# frozen: mpmath.airyai(0) at 50 digits
AIRY_AT_0 = 0.35502805388781724


def rate_by_quadrature(u, h):
    e = cx.energy_barrier(h)
    val, _ = quad(lambda t: math.sqrt(t * t - e * e), u, -e)
    return (2.0 / (e * e)) * val


class TestEnergyBarrier:
    def test_h2_is_sqrt2(self):
        assert cx.energy_barrier(2) == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_h3(self):
        assert cx.energy_barrier(3) == pytest.approx(1.6329931619, abs=1e-9)

    def test_rejects_h1(self):
        with pytest.raises(InvalidOrderError):
            cx.energy_barrier(1)


class TestRateFunction:
    def test_zero_at_barrier(self):
        assert cx.rate_function(-cx.energy_barrier(3), 3) == pytest.approx(0.0, abs=1e-12)

    def test_value_at_minus_two(self):
        assert cx.rate_function(-2.0, 3) == pytest.approx(RATE_AT_MINUS_2_H3, abs=1e-10)

    def test_rejects_inside_barrier(self):
        with pytest.raises(DomainError):
            cx.rate_function(-1.0, 3)

    @pytest.mark.parametrize("h", [2, 3, 4, 5])
    def test_matches_quadrature(self, h):
        e = cx.energy_barrier(h)
        for u in np.linspace(-5.0, -e, 40):
            assert cx.rate_function(u, h) == pytest.approx(
                rate_by_quadrature(u, h), abs=1e-8
            )

    def test_increases_as_u_decreases(self):
        vals = [cx.rate_function(u, 3) for u in np.linspace(-1.64, -6.0, 50)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestComplexityTotal:
    def test_value_at_zero(self):
        assert cx.complexity(0.0, 3) == pytest.approx(0.5 * math.log(2.0), abs=1e-12)

    def test_flat_above_zero(self):
        assert cx.complexity(7.0, 3) == cx.complexity(0.0, 3)

    def test_value_at_barrier(self):
        # second branch: log(2)/2 - E^2/8 = log(2)/2 - 1/3
        expect = 0.5 * math.log(2.0) - 1.0 / 3.0
        got = cx.complexity(-cx.energy_barrier(3), 3)
        assert got == pytest.approx(expect, abs=1e-12)
        assert got == pytest.approx(0.0132402569, abs=1e-9)

    @pytest.mark.parametrize("h", [2, 3, 4, 5])
    def test_continuity_at_branch_points(self, h):
        # A straddle difference |f(x-d) - f(x+d)| picks up the smooth slope
        # (~0.4 * 2d here), so measure the seam jump with a symmetric second
        # difference instead: it cancels the slope and exposes any branch
        # mismatch at O(1).
        d = 1e-6
        e = cx.energy_barrier(h)
        for x in (-e, 0.0):
            jump = cx.complexity(x - d, h) + cx.complexity(x + d, h) - 2 * cx.complexity(x, h)
            assert abs(jump) <= 1e-8

    @pytest.mark.parametrize("h", [2, 3, 4, 5])
    def test_monotone_non_decreasing(self, h):
        grid = np.linspace(-3.0, 1.0, 1000)
        vals = np.array([cx.complexity(u, h) for u in grid])
        assert np.all(np.diff(vals) >= -1e-12)


class TestComplexityFixedIndex:
    def test_matches_total_at_barrier_for_k0(self):
        u = -cx.energy_barrier(3)
        assert cx.complexity_fixed_index(u, 0, 3) == pytest.approx(
            cx.complexity(u, 3), abs=1e-12
        )

    def test_each_index_pays_one_more_rate_unit(self):
        gap = cx.complexity_fixed_index(-2.0, 0, 3) - cx.complexity_fixed_index(-2.0, 1, 3)
        assert gap == pytest.approx(cx.rate_function(-2.0, 3), abs=1e-12)

    def test_plateau_above_barrier(self):
        expect = 0.5 * math.log(2.0) - 1.0 / 3.0
        assert cx.complexity_fixed_index(-1.0, 3, 3) == pytest.approx(expect, abs=1e-12)

    def test_plateau_is_continuous(self):
        # The plateau side is exactly constant, so comparing the seam value
        # against a point just inside the plateau measures the jump alone.
        d = 1e-6
        e = cx.energy_barrier(3)
        for k in range(4):
            at_seam = cx.complexity_fixed_index(-e, k, 3)
            on_plateau = cx.complexity_fixed_index(-e + d, k, 3)
            assert abs(at_seam - on_plateau) <= 1e-8

    @pytest.mark.parametrize("h", [3, 4])
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_strictly_below_index_zero_curve(self, h, k):
        e = cx.energy_barrier(h)
        for u in np.linspace(-3.0, -e - 1e-9, 200):
            assert cx.complexity_fixed_index(u, k, h) < cx.complexity_fixed_index(u, 0, h)

    def test_rejects_negative_k(self):
        with pytest.raises(InvalidOrderError):
            cx.complexity_fixed_index(-2.0, -1, 3)


class TestThresholdLevels:
    def test_ground_state_bracket(self):
        e0 = cx.ground_state(3)
        assert 1.63299 < e0 < 1.70

    def test_ground_state_is_a_root(self):
        e0 = cx.ground_state(3)
        assert abs(cx.complexity_fixed_index(-e0, 0, 3)) <= 1e-9

    def test_h2_unsupported(self):
        with pytest.raises(InvalidOrderError):
            cx.ground_state(2)

    def test_k0_equals_ground_state(self):
        assert cx.layer_threshold(3, 0) == cx.ground_state(3)

    def test_k1_strictly_between(self):
        e1 = cx.layer_threshold(3, 1)
        assert cx.energy_barrier(3) < e1 < cx.ground_state(3)

    def test_deep_layers_approach_barrier(self):
        assert cx.layer_threshold(3, 50) - cx.energy_barrier(3) < 0.02

    @pytest.mark.parametrize("h", [3, 4])
    def test_strict_ordering_chain(self, h):
        chain = [cx.ground_state(h)] + [cx.layer_threshold(h, k) for k in range(1, 6)]
        assert all(a > b for a, b in zip(chain, chain[1:]))
        assert chain[-1] > cx.energy_barrier(h)

    def test_thresholds_bundle(self):
        t = cx.thresholds(3, k_max=3)
        assert t.e_0 == cx.ground_state(3)
        assert t.e_k == tuple(cx.layer_threshold(3, k) for k in (1, 2, 3))


class TestEdgeIntegral:
    def test_empty_interval(self):
        assert cx.semicircle_edge_integral(math.sqrt(2.0)) == pytest.approx(0.0, abs=1e-12)

    def test_value_at_two(self):
        assert cx.semicircle_edge_integral(2.0) == pytest.approx(
            EDGE_INTEGRAL_AT_2, abs=1e-10
        )

    def test_rejects_below_sqrt2(self):
        with pytest.raises(DomainError):
            cx.semicircle_edge_integral(1.0)

    def test_matches_quadrature(self):
        for v in np.linspace(math.sqrt(2.0), 5.0, 40):
            expect, _ = quad(lambda x: math.sqrt(abs(x * x - 2.0)), math.sqrt(2.0), v)
            assert cx.semicircle_edge_integral(v) == pytest.approx(expect, abs=1e-8)


class TestMeanCounts:
    def test_airy_constant(self):
        assert cx.airy_ai_zero() == pytest.approx(AIRY_AT_0, abs=1e-12)

    def test_positive_level_closed_form(self):
        est = cx.mean_critical_count(1.0, 10, 3)
        expect_log = (
            math.log(4.0 * math.sqrt(2.0) / math.sqrt(math.pi))
            + 0.5 * math.log(10.0)
            + 10.0 * cx.complexity(0.0, 3)
        )
        assert est.log_value == pytest.approx(expect_log, abs=1e-12)
        # exp(10 * theta(0)) = 2**5 exactly, so the linear value is easy to pin
        assert est.value == pytest.approx(
            4.0 * math.sqrt(2.0) / math.sqrt(math.pi) * math.sqrt(10.0) * 32.0, rel=1e-12
        )
        assert est.value == pytest.approx(322.961, abs=1e-3)

    def test_barrier_level_uses_airy_prefactor(self):
        u = -cx.energy_barrier(3)
        est = cx.mean_critical_count(u, 100, 3)
        expect_log = (
            math.log(2.0 * AIRY_AT_0 * math.sqrt(6.0) / 3.0)
            - math.log(100.0) / 3.0
            + 100.0 * cx.complexity(u, 3)
        )
        assert est.log_value == pytest.approx(expect_log, abs=1e-10)

    @pytest.mark.parametrize("u", [-1.8, -1.0, 1.0])
    def test_log_asymptotics_converge(self, u):
        gaps = [
            abs(cx.mean_critical_count(u, lam, 3).log_value / lam - cx.complexity(u, 3))
            for lam in (100, 1000, 10000)
        ]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-3

    def test_overflow_guard_drops_linear_value(self):
        est = cx.mean_critical_count(1.0, 10000, 3)
        assert est.value is None
        assert est.log_value > 700

    def test_minima_le_all_critical(self):
        a = cx.mean_minima_count(-1.8, 50, 3)
        b = cx.mean_critical_count(-1.8, 50, 3)
        assert a.log_value <= b.log_value + 1e-12

    def test_minima_dominate_at_leading_order(self):
        for u in (-1.7, -2.0, -3.0):
            a = cx.mean_minima_count(u, 80, 3)
            b = cx.mean_critical_count(u, 80, 3)
            assert a.log_value == pytest.approx(b.log_value, abs=1e-12)

    def test_minima_domain_error_above_barrier(self):
        with pytest.raises(DomainError):
            cx.mean_minima_count(-1.5, 50, 3)

    def test_zero_level_rejected(self):
        with pytest.raises(DomainError):
            cx.mean_critical_count(0.0, 50, 3)

    def test_h2_unsupported(self):
        with pytest.raises(InvalidOrderError):
            cx.mean_critical_count(-2.0, 50, 2)


class TestCurve:
    def test_grid_and_shapes(self):
        c = cx.complexity_curve(3, k_max=2, u_min=-2.0, u_max=0.5, points=101)
        assert c.u.shape == (101,)
        assert c.theta.shape == (101,)
        assert c.theta_k.shape == (3, 101)

    def test_rejects_reversed_grid(self):
        with pytest.raises(ValueError):
            cx.complexity_curve(3, 1, 1.0, -1.0, 10)
