"""Closed-form rates against the finite-difference instrument and frozen values."""

import math

import numpy as np
import pytest

from zenokick import analytics
from zenokick.core import OffResonanceError, SystemParams

RESONANT = SystemParams()
DETUNED = SystemParams(eps_a=0.1, eps_b=0.2)


class TestRateFree:
    def test_zero_at_start(self):
        assert analytics.rate_free(0.0) == 0.0

    def test_extremal_slope(self):
        # -sin(2t) peaks at t = pi/4; with doubled coupling, at pi/8.
        assert analytics.rate_free(math.pi / 4) == pytest.approx(-1.0, abs=1e-14)
        fast = SystemParams(coupling=2.0)
        assert analytics.rate_free(math.pi / 8, fast) == pytest.approx(-2.0, abs=1e-14)
        numeric = analytics.finite_difference_rate(
            analytics.survival_function((), fast), math.pi / 8, "central"
        )
        assert abs(numeric - (-2.0)) < 1e-8

    def test_matches_central_difference(self):
        p10 = analytics.survival_function((), RESONANT)
        for t in np.linspace(0.0, math.pi, 23)[1:]:
            numeric = analytics.finite_difference_rate(p10, float(t), "central")
            assert abs(analytics.rate_free(float(t)) - numeric) < 1e-8

    def test_off_resonance_rejected(self):
        with pytest.raises(OffResonanceError):
            analytics.rate_free(0.5, DETUNED)


class TestRateAfterOneKick:
    def test_no_kick_equals_free_rate(self):
        assert analytics.rate_after_one_kick(0.7, 0.0) == analytics.rate_free(0.7)

    def test_complete_measurement_nulls_the_rate(self):
        for t_m in (0.2, 0.5, 1.1):
            assert abs(analytics.rate_after_one_kick(t_m, math.pi / 2)) < 1e-16

    def test_inverting_kick_flips_the_sign(self):
        rate = analytics.rate_after_one_kick(0.5, 3 * math.pi / 4)
        assert rate == pytest.approx(0.5950098395293859, abs=1e-14)
        p10 = analytics.survival_function(((0.5, 3 * math.pi / 4),), RESONANT)
        numeric = analytics.finite_difference_rate(p10, 0.5, "right")
        assert abs(rate - numeric) < 1e-4

    def test_random_pairs_match_one_sided_difference(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            t_m = float(rng.uniform(0.05, 1.4))
            g = float(rng.uniform(0.0, 2.0 * math.pi))
            p10 = analytics.survival_function(((t_m, g),), RESONANT)
            numeric = analytics.finite_difference_rate(p10, t_m, "right", 1e-6)
            assert abs(analytics.rate_after_one_kick(t_m, g) - numeric) < 1e-4

    def test_sign_classification(self):
        t_m = 0.4
        free = analytics.rate_free(t_m)
        for g in (0.3, 1.0, 1.5):            # partial kicks keep the sign
            assert analytics.rate_after_one_kick(t_m, g) * free > 0.0
        for g in (1.7, 2.5, 3.0):            # over-rotation inverts it
            assert analytics.rate_after_one_kick(t_m, g) * free < 0.0
        assert analytics.rate_after_one_kick(t_m, math.pi) == pytest.approx(-free, abs=1e-16)

    def test_kick_never_amplifies_the_rate(self):
        free = abs(analytics.rate_free(0.6))
        for g in np.linspace(0.0, 2.0 * math.pi, 25):
            damped = abs(analytics.rate_after_one_kick(0.6, float(g)))
            assert damped <= free + 1e-16
        assert abs(analytics.rate_after_one_kick(0.6, math.pi)) == free   # |cos pi| = 1
        for g in (0.5, 1.2, 2.1, 2.8):
            assert abs(analytics.rate_after_one_kick(0.6, g)) < free      # strict otherwise


class TestRateSuperZeno:
    def test_echo_point_is_stationary(self):
        assert analytics.rate_super_zeno(0.5, 0.5) == 0.0

    def test_frozen_values_and_signs(self):
        assert analytics.rate_super_zeno(0.5, 0.2) == pytest.approx(0.5646424733950354, abs=1e-15)
        assert analytics.rate_super_zeno(0.5, 0.8) == pytest.approx(-0.5646424733950354, abs=1e-15)

    def test_matches_central_difference_after_mirror_kick(self):
        t_m = 0.5
        p10 = analytics.survival_function(((t_m, math.pi),), RESONANT)
        for t in (0.2, 0.35, 0.8):
            numeric = analytics.finite_difference_rate(p10, t_m + t, "central")
            assert abs(analytics.rate_super_zeno(t_m, t) - numeric) < 1e-8

    def test_off_resonance_rejected(self):
        with pytest.raises(OffResonanceError):
            analytics.rate_super_zeno(0.5, 0.2, DETUNED)


class TestRateAfterNKicks:
    def test_zero_kicks_is_the_free_rate(self):
        assert analytics.rate_after_n_kicks(0.5, 1.0, 0) == analytics.rate_free(0.5)

    def test_frozen_three_kick_value(self):
        rate = analytics.rate_after_n_kicks(0.5, math.pi / 4, 3)
        assert rate == pytest.approx(-0.297504919764693, abs=1e-14)
        p10 = analytics.survival_function(((0.5, math.pi / 4),) * 3, RESONANT)
        numeric = analytics.finite_difference_rate(p10, 0.5, "right")
        assert abs(rate - numeric) < 1e-4

    def test_geometric_in_the_kick_count(self):
        for g in (0.3, 1.2, 2.0, 2.9):
            cg = math.cos(g)
            for n in range(6):
                assert analytics.rate_after_n_kicks(0.5, g, n + 1) == (
                    analytics.rate_after_n_kicks(0.5, g, n) * cg
                )

    def test_vanishes_for_long_bursts(self):
        for g in (0.4, 2.0):
            bound = 2.0 * abs(math.cos(g)) ** 40
            assert abs(analytics.rate_after_n_kicks(0.8, g, 40)) <= bound
        assert abs(analytics.rate_after_n_kicks(0.8, 0.4, 500)) < 1e-15

    def test_spread_kicks_approach_the_burst_rate(self):
        # The burst formula is the limit of ever denser kicks in a fixed
        # window: the gap-growth contribution to the rate shrinks like 1/n.
        t1, g, window = 0.5, math.pi / 3, 0.02

        def deviation(n):
            times = t1 + window * np.arange(1, n + 1) / n
            spread = analytics.survival_function(tuple((float(t), g) for t in times), RESONANT)
            numeric = analytics.finite_difference_rate(spread, t1 + window, "right")
            return abs(numeric - analytics.rate_after_n_kicks(t1, g, n))

        coarse, fine = deviation(20), deviation(320)
        assert fine < coarse / 8
        assert fine < 2e-4

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            analytics.rate_after_n_kicks(0.5, 1.0, -1)


class TestSurvivalFunction:
    def test_only_past_kicks_apply(self):
        p10 = analytics.survival_function(((0.5, math.pi / 2),), RESONANT)
        assert p10(0.3) == pytest.approx(math.cos(0.3) ** 2, abs=1e-14)
        assert p10(0.5) == pytest.approx(math.cos(0.5) ** 2, abs=1e-14)  # continuous at the kick
        assert p10(1.0) == pytest.approx(math.cos(0.5) ** 4, abs=1e-14)

    def test_rejects_negative_times(self):
        p10 = analytics.survival_function((), RESONANT)
        with pytest.raises(ValueError):
            p10(-0.1)


class TestFiniteDifferenceRate:
    def test_central_on_a_smooth_curve(self):
        curve = lambda t: math.cos(t) ** 2
        numeric = analytics.finite_difference_rate(curve, math.pi / 4, "central", 1e-5)
        assert abs(numeric - (-1.0)) < 1e-8

    def test_right_sided_at_a_complete_measurement(self):
        p10 = analytics.survival_function(((0.5, math.pi / 2),), RESONANT)
        assert abs(analytics.finite_difference_rate(p10, 0.5, "right")) < 1e-4

    def test_left_sided_sees_the_free_rate(self):
        p10 = analytics.survival_function(((0.5, math.pi / 2),), RESONANT)
        numeric = analytics.finite_difference_rate(p10, 0.5, "left")
        assert abs(numeric - analytics.rate_free(0.5)) < 1e-4

    def test_tiny_steps_rejected(self):
        with pytest.raises(ValueError):
            analytics.finite_difference_rate(lambda t: t, 0.5, "central", 1e-10)

    def test_unknown_side_rejected(self):
        with pytest.raises(ValueError):
            analytics.finite_difference_rate(lambda t: t, 0.5, "sideways")
