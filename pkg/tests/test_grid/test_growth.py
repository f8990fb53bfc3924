import math

import numpy as np
import pytest

from genfunc.errors import BoundaryDecayViolation, InsufficientPoints, PreconditionViolated
from genfunc.grid.box import Box
from genfunc.grid.function import EpsilonNet, GridFunction, geometric_ladder
from genfunc.grid.growth import (
    NegligibleMode,
    ProfileAxis,
    assemble_profile,
    check_product_estimate,
    fit_growth,
    is_negligible,
    profile_decay,
    profile_space,
    tail_decay,
)

LADDER = np.array(geometric_ladder(4.0, 14.0))


class TestFitGrowth:
    def test_power_law(self):
        fit = fit_growth(LADDER**-2.0, LADDER)
        assert fit.exponent == pytest.approx(2.0)
        assert fit.residual == pytest.approx(0.0, abs=1e-12)

    def test_constant(self):
        fit = fit_growth(np.full(LADDER.shape, 5.0), LADDER)
        assert fit.exponent == pytest.approx(0.0, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log(5.0))

    def test_log_correction_lands_between_exponents(self):
        fit = fit_growth(LADDER**-1.0 * np.abs(np.log(LADDER)), LADDER)
        assert 1.05 <= fit.exponent <= 1.25

    def test_mostly_floored_is_negligible(self):
        values = np.where(np.arange(LADDER.size) < 4, 1.0, 0.0)
        fit = fit_growth(values, LADDER)
        assert fit.negligible
        assert fit.exponent == -math.inf

    def test_half_floored_is_insufficient(self):
        ladder = geometric_ladder(1.0, 6.0)
        with pytest.raises(InsufficientPoints):
            fit_growth([1.0, 1.0, 1.0, 0.0, 0.0, 0.0], ladder)

    def test_window_keeps_tail(self):
        values = np.concatenate([np.full(5, 7.0), LADDER[5:] ** -3.0])
        assert fit_growth(values, LADDER, window=6).exponent == pytest.approx(3.0)

    def test_short_ladder(self):
        with pytest.raises(PreconditionViolated):
            fit_growth([1.0] * 5, geometric_ladder(1.0, 5.0))


class TestProfiles:
    def test_non_strict_assembly_uses_sentinel(self):
        ladder = geometric_ladder(1.0, 6.0)
        frames = [np.array([1.0, v]) for v in (1.0, 1.0, 1.0, 0.0, 0.0, 0.0)]
        with pytest.raises(InsufficientPoints):
            assemble_profile(ProfileAxis.SPACE_L, frames, ladder)
        profile = assemble_profile(ProfileAxis.SPACE_L, frames, ladder, strict=False)
        assert profile.exponents()[1] == -math.inf
        assert profile.entries[1].exponent is None

    def test_smooth_embedding_is_flat(self, sigma_gaussian):
        exponents = profile_space(sigma_gaussian.net, L=3).exponents()
        assert np.all(np.abs(exponents) < 1e-6)

    def test_scaled_net(self, sigma_gaussian):
        exponents = profile_space(sigma_gaussian.net.power_scaled(3.0), L=2).exponents()
        assert exponents == pytest.approx([3.0, 3.0, 3.0], abs=1e-6)

    def test_decay_profile_shape(self, sigma_gaussian):
        profile = profile_decay(sigma_gaussian.net, Q=2, L=1)
        assert profile.shape == (3, 2)
        assert profile.axis is ProfileAxis.TWO_INDEX
        assert len(profile.rows()) == 6

    def test_decay_profile_needs_decay(self, box, ladder):
        flat = EpsilonNet.constant(GridFunction.from_callable(box, np.ones_like), ladder)
        with pytest.raises(BoundaryDecayViolation):
            profile_decay(flat)


class TestNegligible:
    def test_zero(self, box, ladder):
        assert is_negligible(EpsilonNet.zeros(box, ladder))

    def test_fast_decay(self, sigma_gaussian):
        assert is_negligible(sigma_gaussian.net.power_scaled(-5.0))

    def test_slow_decay(self, sigma_gaussian):
        assert not is_negligible(sigma_gaussian.net.power_scaled(-2.0))

    def test_decay_mode(self, sigma_gaussian):
        assert is_negligible(sigma_gaussian.net.power_scaled(-5.0), NegligibleMode.DECAY, Q=3)

    def test_single_zero_frame_is_not_a_tail(self):
        box = Box.symmetric(8.0, 256)
        ones, zeros = np.ones(box.shape), np.zeros(box.shape)
        net = EpsilonNet.from_frames(box, geometric_ladder(1.0, 7.0), [ones] * 6 + [zeros])
        assert is_negligible(net) is False

    def test_two_zero_frames_reach_the_floor(self):
        box = Box.symmetric(8.0, 256)
        ones, zeros = np.ones(box.shape), np.zeros(box.shape)
        net = EpsilonNet.from_frames(box, geometric_ladder(1.0, 7.0), [ones] * 5 + [zeros] * 2)
        assert is_negligible(net)


class TestTailDecay:
    def test_lone_drop_fits_the_frames_before_it(self):
        values = np.array([1.0] * 6 + [0.0])
        slope, reached, _ = tail_decay(values, LADDER[:7], 1e-13)
        assert not reached
        assert slope == pytest.approx(0.0, abs=1e-12)

    def test_floored_suffix(self):
        values = np.array([1.0] * 5 + [0.0, 0.0])
        assert tail_decay(values, LADDER[:7], 1e-13)[:2] == (math.inf, True)

    def test_power_law(self):
        slope, reached, _ = tail_decay(LADDER**5.0, LADDER, 1e-300)
        assert not reached
        assert slope == pytest.approx(5.0)

    def test_short_window_without_floor(self):
        with pytest.raises(InsufficientPoints):
            tail_decay(np.ones(LADDER.size), LADDER, 1e-13, tail_window=3)


def test_product_estimate(iota_delta):
    estimate = check_product_estimate(iota_delta.net, iota_delta.net, L=2)
    assert estimate.passed
    assert estimate.measured[0] == pytest.approx(2.0, abs=0.25)
