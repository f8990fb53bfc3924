import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genfunc.errors import PreconditionViolated, Unclassifiable
from genfunc.grid.function import geometric_ladder
from genfunc.grid.growth import GrowthProfile, ProfileAxis, ProfileEntry
from genfunc.scales.classify import classify_profile, family_chain, in_family, linear_fit
from genfunc.scales.families import (
    Lift,
    RegularScaleFamily,
    TwoIndexScaleFamily,
    default_a_grid,
    increments,
    l_variation,
    q_variation,
)


class TestRegularScaleFamily:
    def test_labels(self):
        assert RegularScaleFamily.bounded().label == "B"
        assert RegularScaleFamily.r1().label == "R1"
        assert RegularScaleFamily.ra(2.25).label == "Ra(2.25)"
        assert RegularScaleFamily.full().label == "Full"

    def test_from_cli_rejects_unknown(self):
        with pytest.raises(ValueError):
            RegularScaleFamily.from_cli("polynomial")

    def test_chain_ranks_ascend(self):
        ranks = [f.rank for f in family_chain()]
        assert ranks == sorted(ranks)
        assert ranks[-1] == math.inf

    def test_a_grid_starts_above_one(self):
        grid = default_a_grid()
        assert grid[0] == 1.25
        assert all(a > 1.0 for a in grid)

    def test_increments_clamp_decay(self):
        assert increments([-math.inf, -1.0, 2.0, 1.0]).tolist() == [0.0, 0.0, 2.0, 2.0]

    def test_ra_rejects_steeper_slope(self):
        family = RegularScaleFamily.ra(2.0)
        exponents = [0.0, 2.5, 5.0, 7.5]
        assert not family.accepts(exponents)
        assert family.margin(exponents) <= 0.0


class TestClassifyProfile:
    @pytest.mark.parametrize(
        "exponents, label",
        [
            ([0.02, -0.01, 0.03, 0.01], "B"),
            ([1.0, 2.0, 3.1, 4.0], "R1"),
            ([0.0, 2.1, 4.0, 6.2], "Ra(2.25)"),
        ],
    )
    def test_smallest_family(self, make_profile, exponents, label):
        result = classify_profile(make_profile(exponents))
        assert result.label == label
        assert result.margin >= 0.0

    def test_decay_is_bounded(self, make_profile):
        result = classify_profile(make_profile([-math.inf, -2.0, -4.0, -6.0]))
        assert result.label == "B"
        assert result.fit.slope == pytest.approx(0.0)

    def test_fit_is_through_clamped_values(self):
        fit = linear_fit([1.0, 2.0, 3.0, 4.0])
        assert fit.slope == pytest.approx(1.0)
        assert fit.intercept == pytest.approx(1.0)

    def test_too_few_indices(self, make_profile):
        with pytest.raises(PreconditionViolated):
            classify_profile(make_profile([0.0, 1.0, 2.0]))

    def test_two_index_profile_rejected(self):
        profile = GrowthProfile(
            axis=ProfileAxis.TWO_INDEX,
            entries=[
                ProfileEntry(index=(q, l), exponent=float(l), intercept=0.0, residual=0.0)
                for q in range(2)
                for l in range(2)
            ],
            ladder_used=geometric_ladder(5.0, 10.0),
        )
        with pytest.raises(PreconditionViolated):
            classify_profile(profile)

    def test_poor_fit_is_unclassifiable(self, make_profile):
        with pytest.raises(Unclassifiable):
            classify_profile(make_profile([1.0, 2.0, 3.0, 4.0], residual=0.5))

    def test_poor_fit_counts_as_outside(self, make_profile):
        profile = make_profile([1.0, 2.0, 3.0, 4.0], residual=0.5)
        assert not in_family(profile, RegularScaleFamily.full())


class TestTwoIndexFamily:
    def test_u_lift_needs_flat_q(self):
        flat = np.array([[0.0, 1.0, 2.0, 3.0]] * 3)
        family = TwoIndexScaleFamily(base=RegularScaleFamily.r1(), lift=Lift.U)
        assert q_variation(flat) == 0.0
        assert family.accepts(flat)

        tilted = flat + np.arange(3.0)[:, None]
        assert not family.accepts(tilted)

    def test_d_lift_reads_first_column(self):
        table = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        assert l_variation(table) == 0.0
        assert TwoIndexScaleFamily(base=RegularScaleFamily.r1(), lift=Lift.D).accepts(table)

    def test_sentinels_ignored_by_variation(self):
        table = np.array([[0.0, 1.0], [-np.inf, 1.0]])
        assert q_variation(table) == 0.0


# quarter steps keep the shifted sums exact
nonneg = st.lists(st.integers(0, 24).map(lambda i: i / 4), min_size=4, max_size=10)


@given(nonneg, st.integers(0, 10))
def test_constant_shift_keeps_family(exponents, shift):
    for family in family_chain():
        assert family.accepts(exponents) == family.accepts([e + shift for e in exponents])


@pytest.mark.parametrize("a", default_a_grid())
@given(exponents=nonneg)
def test_chain_is_monotone(a, exponents):
    b, r1, ra = RegularScaleFamily.bounded(), RegularScaleFamily.r1(), RegularScaleFamily.ra(a)
    if b.accepts(exponents):
        assert r1.accepts(exponents)
    if r1.accepts(exponents):
        assert ra.accepts(exponents)
        assert ra.margin(exponents) >= 0.0


@pytest.mark.parametrize("slope", [1.1, 1.2, 1.25])
@pytest.mark.parametrize("a", [1.25, 1.5])
def test_r1_slope_tolerance_carries_into_ra(slope, a):
    exponents = [slope * n for n in range(4)]
    assert RegularScaleFamily.r1().accepts(exponents)
    assert RegularScaleFamily.ra(a).accepts(exponents)
