import math

import numpy as np
import pytest

from genfunc.embed.embeddings import embed_iota
from genfunc.errors import BoundaryDecayViolation, PreconditionViolated
from genfunc.fourier.transform import (
    frequency_net,
    ft_frame,
    ft_net,
    ift_net,
    plancherel_defects,
    roundtrip_errors,
)
from genfunc.grid.box import Box
from genfunc.grid.function import EpsilonNet, GridFunction, Side
from genfunc.mollifier.plateau import psi
from genfunc.models.distribution import DistributionSpec


class TestTransform:
    def test_gaussian_is_self_dual(self):
        box = Box.symmetric(8.0, 1024)
        g = GridFunction.from_callable(box, lambda x: np.exp(-x * x / 2.0))
        hat = ft_frame(g)
        xi = hat.box.nodes()
        exact = math.sqrt(2.0 * math.pi) * np.exp(-xi * xi / 2.0)
        assert np.max(np.abs(hat.samples - exact)) < 1e-9

    def test_mollifier_spectrum(self, iota_S_delta):
        freq = ft_net(iota_S_delta.net)
        assert freq.side is Side.FREQUENCY
        assert freq.conjugate == iota_S_delta.net.box
        xi = freq.box.nodes()
        for eps, frame in zip(freq.ladder, freq.frames):
            assert np.max(np.abs(frame.samples - psi(eps * xi))) < 1e-8

    def test_zero(self, box, ladder):
        freq = ft_net(EpsilonNet.zeros(box, ladder))
        assert freq.sup_norms().max() == 0.0

    def test_round_trip(self, sigma_gaussian, iota_S_delta):
        assert roundtrip_errors(sigma_gaussian.net).max() < 1e-12
        assert roundtrip_errors(iota_S_delta.net).max() < 1e-10

    def test_plancherel(self, iota_S_delta):
        assert plancherel_defects(iota_S_delta.net).max() < 1e-10

    def test_frequency_net_round_trip(self, box, ladder):
        spectra = [psi(e * box.frequency_box().nodes()) for e in ladder]
        back = ift_net(frequency_net(box, ladder, spectra))
        assert back.side is Side.SPACE
        assert back.box == box


class TestPreconditions:
    def test_forward_needs_space_side(self, iota_S_delta):
        with pytest.raises(PreconditionViolated):
            ft_net(ft_net(iota_S_delta.net))

    def test_inverse_needs_frequency_side(self, iota_S_delta):
        with pytest.raises(PreconditionViolated):
            ift_net(iota_S_delta.net)

    def test_forward_needs_decay(self, mollifier, box, ladder):
        net = embed_iota(DistributionSpec.heaviside(), mollifier, ladder, box).net
        with pytest.raises(BoundaryDecayViolation):
            ft_net(net)
