import numpy as np
import pytest

from genfunc.errors import PreconditionViolated, SubboxOutOfRange
from genfunc.grid.box import Box, SubBox
from genfunc.grid.function import EpsilonNet, GridFunction, Side, geometric_ladder


class TestBox:
    def test_nodes_exclude_right_end(self):
        box = Box.symmetric(8.0, 64)
        x = box.nodes()
        assert x[0] == -8.0
        assert x[-1] == pytest.approx(8.0 - 0.25)
        assert x[32] == 0.0

    @pytest.mark.parametrize("n", [63, 100, 32])
    def test_n_must_be_power_of_two(self, n):
        with pytest.raises(ValueError):
            Box.symmetric(1.0, n)

    def test_empty_box_rejected(self):
        with pytest.raises(ValueError):
            Box(lo=(1.0,), hi=(1.0,), n=64)

    def test_frequency_box_spans_nyquist(self):
        box = Box.symmetric(8.0, 1024)
        freq = box.frequency_box()
        assert freq.lo[0] == pytest.approx(-box.nyquist)
        assert freq.spacing[0] == pytest.approx(2 * np.pi / 16.0)

    def test_central_half(self):
        sub = Box.symmetric(8.0, 64, dim=2).central_half()
        assert sub.lo == (-4.0, -4.0)
        assert sub.hi == (4.0, 4.0)

    def test_index_slices(self):
        box = Box.symmetric(8.0, 64)
        (window,) = box.index_slices(SubBox.interval(-1.0, 1.0))
        assert box.nodes()[window].tolist() == pytest.approx([-1.0, -0.75, -0.5, -0.25, 0.0,
                                                              0.25, 0.5, 0.75, 1.0])

    def test_subbox_outside(self):
        with pytest.raises(SubboxOutOfRange):
            Box.symmetric(8.0, 64).index_slices(SubBox.interval(-9.0, 0.0))


class TestEpsilonNet:
    def test_ladder(self):
        ladder = geometric_ladder(5.0, 7.5, 0.5)
        assert len(ladder) == 6
        assert ladder[0] == 2.0**-5
        assert ladder[-1] == pytest.approx(2.0**-7.5)

    def test_short_ladder_rejected(self):
        box = Box.symmetric(8.0, 64)
        with pytest.raises(PreconditionViolated):
            EpsilonNet.zeros(box, geometric_ladder(1.0, 4.0))

    def test_unordered_ladder_rejected(self):
        box = Box.symmetric(8.0, 64)
        with pytest.raises(PreconditionViolated):
            EpsilonNet.zeros(box, tuple(reversed(geometric_ladder(1.0, 6.0))))

    def test_algebra(self):
        box = Box.symmetric(8.0, 64)
        ladder = geometric_ladder(1.0, 6.0)
        one = EpsilonNet.constant(GridFunction.from_callable(box, np.ones_like), ladder)
        net = (one + one).power_scaled(1.0)
        assert net.sup_norms() == pytest.approx([2.0 / e for e in ladder])
        assert (net - net).sup_norms().max() == 0.0

    def test_mismatched_sides(self):
        box = Box.symmetric(8.0, 64)
        ladder = geometric_ladder(1.0, 6.0)
        with pytest.raises(PreconditionViolated):
            EpsilonNet.zeros(box, ladder) + EpsilonNet.zeros(box, ladder, Side.FREQUENCY)

    def test_non_finite_samples_rejected(self):
        box = Box.symmetric(8.0, 64)
        with pytest.raises(ValueError):
            GridFunction(box, np.full(64, np.nan))


def test_cache_is_shared_across_workers():
    from genfunc.utils.parallel import ordered_map

    frame = GridFunction.zeros(Box.symmetric(1.0, 64))
    calls = []

    def compute():
        calls.append(1)
        return np.arange(4.0)

    results = ordered_map(lambda _: frame.cached("k", compute), range(16), jobs=4)
    assert all(r is results[0] for r in results)
    assert frame.cached("k", compute) is results[0]
