import pytest

from genfunc.errors import RangeTooSmall
from genfunc.scales.axioms import (
    Axiom,
    check_all,
    check_max_closure,
    check_overstability,
    check_superadditive_closure,
    superadditive_envelope,
)
from genfunc.scales.families import FamilyName, RegularScaleFamily
from genfunc.scales.sequences import ScaleSequence


class TestOverstability:
    def test_bounded_constants_translate_to_constants(self):
        report = check_overstability(RegularScaleFamily.bounded(), n_max=20, k_max=5)
        assert report.passed
        assert report.axiom is Axiom.TRANSLATION
        # binding instance: N ≡ 3 shifted by k′ = 5
        assert report.witness.sequence == ScaleSequence.constant(8.0)

    def test_r1_affine_shift_keeps_slope(self):
        family = RegularScaleFamily(
            name=FamilyName.R1, generators=(ScaleSequence.affine(1.0, 1.0),)
        )
        report = check_overstability(family, n_max=20, k_max=5)
        assert report.passed
        assert report.witness.sequence.a == 1.0
        assert report.witness.sequence.b == pytest.approx(11.0)

    def test_log1_passes(self):
        family = RegularScaleFamily(
            name=FamilyName.LOG1, generators=(ScaleSequence.log_affine(1.0, 1.0),)
        )
        assert check_overstability(family, n_max=50, k_max=5).passed

    @pytest.mark.parametrize("n_max, k_max", [(3, 5), (20, 1)])
    def test_range_too_small(self, n_max, k_max):
        with pytest.raises(RangeTooSmall):
            check_overstability(RegularScaleFamily.bounded(), n_max=n_max, k_max=k_max)


class TestSuperadditivity:
    def test_log_without_slope_freedom_fails(self):
        family = RegularScaleFamily(name=FamilyName.LOG)
        report = check_superadditive_closure(family, n_max=50, b_max=20.0)
        assert not report.passed
        assert report.witness.indices == [25, 25]
        assert report.witness.lhs > report.witness.rhs
        assert report.witness.reproduce(Axiom.SUPERADDITIVE)

    def test_log1_passes(self):
        family = RegularScaleFamily(name=FamilyName.LOG1)
        assert check_superadditive_closure(family, n_max=50, b_max=20.0).passed

    def test_bounded_sums_bounds(self):
        report = check_superadditive_closure(RegularScaleFamily.bounded(), n_max=50)
        assert report.passed
        assert report.witness.sequence == ScaleSequence.constant(6.0)

    def test_envelope_of_constants(self):
        env = superadditive_envelope(
            ScaleSequence.constant(1.0), ScaleSequence.constant(2.0), 10
        )
        assert env.tolist() == [3.0] * 11

    def test_range_too_small(self):
        with pytest.raises(RangeTooSmall):
            check_superadditive_closure(RegularScaleFamily.bounded(), n_max=7)


class TestMaxClosure:
    def test_r1(self):
        assert check_max_closure(RegularScaleFamily.r1(), n_max=30).passed

    def test_range_too_small(self):
        with pytest.raises(RangeTooSmall):
            check_max_closure(RegularScaleFamily.bounded(), n_max=3)


@pytest.mark.parametrize("name", ["bounded", "r1", "ra", "log1", "full"])
def test_regular_families_pass_every_axiom(name):
    reports = check_all(RegularScaleFamily.from_cli(name))
    assert [r.axiom for r in reports] == [Axiom.TRANSLATION, Axiom.MAX, Axiom.SUPERADDITIVE]
    assert all(r.passed for r in reports)


def test_parallel_search_matches_serial():
    family = RegularScaleFamily.from_cli("log")
    serial = check_superadditive_closure(family, jobs=1)
    threaded = check_superadditive_closure(family, jobs=4)
    assert serial.model_dump() == threaded.model_dump()
