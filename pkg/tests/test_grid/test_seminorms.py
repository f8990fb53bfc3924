import numpy as np
import pytest

from genfunc.errors import BoundaryDecayViolation, PreconditionViolated
from genfunc.grid.box import Box, SubBox
from genfunc.grid.derivatives import Scheme, derivative, stencil_weights
from genfunc.grid.function import GridFunction
from genfunc.grid.seminorms import seminorm_mu, seminorm_p, seminorm_table, window_sups


def gaussian(box: Box) -> GridFunction:
    return GridFunction.from_callable(box, lambda x: np.exp(-x * x))


class TestDerivative:
    def test_stencil_weights(self):
        assert stencil_weights((-1, 0, 1), 2).tolist() == pytest.approx([1.0, -2.0, 1.0])

    def test_fd4_exact_on_quadratic(self):
        box = Box.symmetric(4.0, 256)
        g = GridFunction.from_callable(box, lambda x: x * x)
        d2 = derivative(g, order=2)
        assert np.max(np.abs(d2.samples - 2.0)) < 1e-9

    def test_fd4_constant(self):
        box = Box.symmetric(4.0, 256)
        g = GridFunction.from_callable(box, lambda x: np.full_like(x, 3.0))
        assert derivative(g, order=1).sup() < 1e-10

    def test_spectral_gaussian(self):
        box = Box.symmetric(8.0, 1024)
        x = box.nodes()
        d2 = derivative(gaussian(box), order=2, scheme=Scheme.SPECTRAL)
        exact = (4 * x * x - 2) * np.exp(-x * x)
        assert np.max(np.abs(d2.samples - exact)) < 1e-8

    def test_spectral_needs_decay(self):
        box = Box.symmetric(4.0, 256)
        g = GridFunction.from_callable(box, lambda x: x)
        with pytest.raises(BoundaryDecayViolation):
            derivative(g, scheme=Scheme.SPECTRAL)

    def test_order_range(self):
        with pytest.raises(PreconditionViolated):
            derivative(gaussian(Box.symmetric(4.0, 256)), order=7)


class TestSeminorms:
    def test_sup_on_compact(self):
        g = gaussian(Box.symmetric(8.0, 1024))
        K = SubBox.interval(-1.0, 1.0)
        assert seminorm_p(g, K, 0) == pytest.approx(1.0)
        # |g'| peaks at √2·e^{−1/2} < 1, so p_{K,1} is still the value at 0
        assert seminorm_p(g, K, 1) == pytest.approx(1.0)

    def test_orders_are_cumulative(self):
        g = gaussian(Box.symmetric(8.0, 1024))
        table = seminorm_table(g, 2, 3)
        assert np.all(np.diff(table, axis=1) >= 0.0)
        assert np.all(np.diff(table, axis=0) >= 0.0)

    def test_weighted_sup(self):
        g = gaussian(Box.symmetric(8.0, 1024))
        assert seminorm_mu(g, 0, 0) == pytest.approx(1.0)
        # max of (1+x)²e^{−x²}, attained at x = (√5 − 1)/2
        assert seminorm_mu(g, 2, 0) == pytest.approx(1.786865, abs=1e-3)

    def test_zero(self):
        g = GridFunction.zeros(Box.symmetric(8.0, 1024))
        assert seminorm_mu(g, 2, 2) == 0.0

    def test_window_sups_match_seminorm(self):
        g = gaussian(Box.symmetric(8.0, 1024))
        windows = [SubBox.interval(-1.0, 1.0), SubBox.interval(2.0, 3.0)]
        sups = window_sups(g, windows, 1)
        assert sups[0, 1] == pytest.approx(seminorm_p(g, windows[0], 1))
        assert sups[1, 0] == pytest.approx(np.exp(-4.0), rel=1e-6)
