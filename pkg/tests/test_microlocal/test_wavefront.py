import math

import numpy as np
import pytest

from genfunc.embed.embeddings import embed_iota
from genfunc.errors import ConeTooThin, PreconditionViolated
from genfunc.fourier.transform import ft_net
from genfunc.grid.box import Box
from genfunc.grid.function import EpsilonNet, geometric_ladder
from genfunc.microlocal.cones import CutoffFamily, default_cones
from genfunc.microlocal.wavefront import (
    check_cutoff_monotonicity,
    check_family_monotonicity,
    check_projection,
    cone_profile,
    cone_profiles,
    microregular,
    radius_violations,
    singular_support,
    wavefront,
)
from genfunc.models.distribution import DistributionSpec, parse_spec
from genfunc.scales.families import RegularScaleFamily

CUTOFFS = CutoffFamily.regular(1, 0.25, 2.0, 0.5)


def near_origin(point, reach=0.25) -> bool:
    return max(abs(c) for c in point) <= reach + 1e-9


@pytest.fixture(scope="module")
def delta_report(iota_delta):
    return wavefront(iota_delta.net, RegularScaleFamily.bounded(), CUTOFFS)


class TestConeProfiles:
    def test_delta_grows_in_both_directions(self, iota_delta, box):
        freq = ft_net(iota_delta.net)
        plus, minus = cone_profiles(freq, default_cones(box), Q=3)
        assert plus.exponents() == pytest.approx([0.0, 1.0, 2.0, 3.0], abs=0.3)
        assert minus.exponents() == pytest.approx(plus.exponents(), abs=1e-6)

    def test_single_cone(self, iota_delta, box):
        freq = ft_net(iota_delta.net)
        _, minus = default_cones(box)
        single = cone_profile(freq, minus, Q=2)
        assert single.exponents() == pytest.approx(cone_profiles(freq, [minus], Q=2)[0].exponents())
        assert single.axis.value == "weight-q"

    def test_zero_net_decays(self, box, ladder):
        freq = ft_net(EpsilonNet.zeros(box, ladder))
        for profile in cone_profiles(freq, default_cones(box)):
            assert np.all(profile.exponents() == -math.inf)

    def test_thin_cones(self, ladder):
        box = Box.symmetric(8.0, 64)
        freq = ft_net(EpsilonNet.zeros(box, ladder))
        with pytest.raises(ConeTooThin):
            cone_profiles(freq, default_cones(box))

    def test_needs_frequency_side(self, iota_delta, box):
        with pytest.raises(PreconditionViolated):
            cone_profiles(iota_delta.net, default_cones(box))


class TestMicroregular:
    def test_away_from_the_singularity(self, iota_delta, box):
        plus, _ = default_cones(box)
        bounded = RegularScaleFamily.bounded()
        assert microregular(iota_delta.net, (0.5,), plus, bounded, CUTOFFS)

    def test_at_the_singularity(self, iota_delta, box):
        plus, _ = default_cones(box)
        bounded = RegularScaleFamily.bounded()
        assert not microregular(iota_delta.net, (0.0,), plus, bounded, CUTOFFS)

    def test_center_must_be_on_the_grid(self, iota_delta, box):
        plus, _ = default_cones(box)
        with pytest.raises(PreconditionViolated):
            microregular(iota_delta.net, (0.1,), plus, RegularScaleFamily.bounded(), CUTOFFS)


class TestWavefront:
    def test_delta(self, delta_report):
        assert delta_report.flagged_keys() >= {((0.0,), "+"), ((0.0,), "-")}
        assert all(near_origin(c) for c in delta_report.wavefront_centers())
        assert all(near_origin(c) for c in delta_report.singsupp_estimate)
        assert (0.0,) in delta_report.singsupp_estimate
        assert check_projection(delta_report)
        assert delta_report.passed

    def test_rows(self, delta_report):
        rows = delta_report.rows()
        assert {"x1", "cone_theta1", "cone_theta2", "radius", "q", "exponent"} <= set(rows[0])
        assert len(rows) == 5 * len(delta_report.entries)

    def test_radius_violations_are_reported(self, delta_report):
        for entry in radius_violations(delta_report):
            assert entry.radius < delta_report.radii[0]
            assert not entry.in_family

    def test_smooth_net_has_empty_wavefront(self, sigma_gaussian):
        report = wavefront(sigma_gaussian.net, RegularScaleFamily.bounded(), CUTOFFS)
        assert report.wavefront == []
        assert report.singsupp_estimate == []
        assert report.passed

    def test_two_point_masses(self, mollifier, box, ladder):
        spec = DistributionSpec.combination(
            (1.0, DistributionSpec.delta()), (1.0, DistributionSpec.delta(at=2.0))
        )
        net = embed_iota(spec, mollifier, ladder, box).net
        report = wavefront(net, RegularScaleFamily.bounded(), CUTOFFS)
        assert {(0.0,), (2.0,)} <= set(report.singsupp_estimate)
        assert check_projection(report)

    def test_full_scan_projects_onto_both_masses(self, mollifier, box, ladder):
        spec = DistributionSpec.combination(
            (1.0, DistributionSpec.delta()), (1.0, DistributionSpec.delta(at=2.0))
        )
        net = embed_iota(spec, mollifier, ladder, box).net
        report = wavefront(net, RegularScaleFamily.bounded(), CUTOFFS, full_scan=True)
        fronts = report.wavefront_centers()
        assert any(near_origin(c) for c in fronts)
        assert any(near_origin((c[0] - 2.0,)) for c in fronts)
        assert all(near_origin(c) or near_origin((c[0] - 2.0,)) for c in fronts)
        assert check_projection(report)

    def test_projection_catches_a_front_outside_the_support(self, delta_report):
        assert not check_projection(delta_report.model_copy(update={"singsupp_estimate": []}))
        shifted = [(c[0] + 1.0,) for c in delta_report.singsupp_estimate]
        moved = delta_report.model_copy(update={"singsupp_estimate": shifted})
        assert not check_projection(moved)

    def test_larger_family_flags_less(self, iota_delta, delta_report):
        r1 = wavefront(iota_delta.net, RegularScaleFamily.r1(), CUTOFFS)
        assert r1.flagged_keys() <= delta_report.flagged_keys()
        assert check_family_monotonicity([r1, delta_report])

    def test_full_scan_covers_every_center(self, iota_delta):
        cutoffs = CutoffFamily.regular(1, 0.5, 1.0, 0.5, count=2)
        report = wavefront(iota_delta.net, RegularScaleFamily.bounded(), cutoffs, full_scan=True)
        centers = sorted({e.center for e in report.entries})
        assert centers == [(-1.0,), (-0.5,), (0.0,), (0.5,), (1.0,)]


class TestMonotonicity:
    @pytest.mark.parametrize("fixture", ["iota_delta", "sigma_bump"])
    def test_cutoff_keeps_regular_cones(self, request, box, fixture):
        net = request.getfixturevalue(fixture).net
        phi = CUTOFFS.cutoff(box, (0.0,), 0.5)
        assert check_cutoff_monotonicity(net, phi, default_cones(box),
                                         RegularScaleFamily.bounded())


def test_singular_support_windows(iota_delta):
    centers = [(-1.0,), (0.0,), (1.0,)]
    verdicts = singular_support(iota_delta.net, RegularScaleFamily.bounded(), centers, 0.125)
    assert [v.flagged for v in verdicts] == [False, True, False]


@pytest.mark.slow
def test_planar_edge_of_a_half_plane(mollifier):
    box = Box.symmetric(4.0, 1024, dim=2)
    ladder = geometric_ladder(3.0, 5.5, 0.5)
    net = embed_iota(parse_spec("heaviside_x_bump"), mollifier, ladder, box).net
    cutoffs = CutoffFamily.regular(2, 0.5, 0.5, 1.0, count=2)
    cones = default_cones(box)
    report = wavefront(net, RegularScaleFamily.bounded(), cutoffs, cones, Q=3)

    assert (0.0, 0.0) in report.singsupp_estimate
    normal = {c.label for c in cones if c.contains_direction((1.0, 0.0))
              or c.contains_direction((-1.0, 0.0))}
    assert {((0.0, 0.0), label) for label in normal} <= report.flagged_keys()
