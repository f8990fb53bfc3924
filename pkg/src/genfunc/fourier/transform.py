"""Continuum-normalized Fourier transform of nets.

Forward: û(ξ) = ∫e^{−ixξ}u(x)dx ≈ h^d·e^{−iξ·lo}·DFT(u), reordered to
ascending ξ.  Inverse: u(x) = (2π)^{−d}∫e^{ixξ}û(ξ)dξ, realized as
h^{−d}·IDFT(û·e^{iξ·lo}).  The frequency grid has n nodes per axis from −π/h
in steps of 2π/(n·h).
"""

from __future__ import annotations

import math

import numpy as np

from genfunc.errors import PreconditionViolated
from genfunc.grid.box import Box
from genfunc.grid.function import EpsilonNet, GridFunction, Side
from genfunc.grid.growth import check_decay_regime
from genfunc.utils.logging import log
from genfunc.utils.parallel import ordered_map

NORMALIZATION = {
    "forward": "h^d * exp(-i xi.lo) * fft(u), fftshifted",
    "inverse": "ifft(ifftshift(u_hat) * exp(i xi.lo)) / h^d",
    "xi": "2*pi*fftfreq(n, h), ascending",
}


def _phase(space: Box, sign: float) -> np.ndarray:
    phase = np.ones(space.shape, dtype=np.complex128)
    for xi, lo in zip(space.frequency_mesh(), space.lo):
        phase = phase * np.exp(sign * 1j * xi * lo)
    return phase


def ft_frame(g: GridFunction) -> GridFunction:
    space = g.box
    spectrum = space.cell_volume * _phase(space, -1.0) * np.fft.fftn(g.samples)
    return GridFunction(space.frequency_box(), np.fft.fftshift(spectrum))


def ift_frame(g: GridFunction, space: Box) -> GridFunction:
    unshifted = np.fft.ifftshift(g.samples)
    values = np.fft.ifftn(unshifted * _phase(space, 1.0)) / space.cell_volume
    return GridFunction(space, values)


def ft_net(net: EpsilonNet, boundary_tol: float = 1e-10, jobs: int = 1) -> EpsilonNet:
    """Space side → frequency side; frames must decay at the box boundary."""
    if net.side is not Side.SPACE:
        raise PreconditionViolated("ft_net takes a space-side net")
    check_decay_regime(net, boundary_tol)
    frames = ordered_map(ft_frame, net.frames, jobs)
    log.debug("Transformed %d frames to the frequency side", len(frames))
    return EpsilonNet(
        net.box.frequency_box(), net.ladder, tuple(frames), Side.FREQUENCY, net.box
    )


def ift_net(net: EpsilonNet, boundary_tol: float = 1e-10, jobs: int = 1) -> EpsilonNet:
    """Frequency side → space side, onto the box the net was transformed from."""
    if net.side is not Side.FREQUENCY or net.conjugate is None:
        raise PreconditionViolated("ift_net takes a frequency-side net with its space box")
    check_decay_regime(net, boundary_tol)
    space = net.conjugate
    frames = ordered_map(lambda f: ift_frame(f, space), net.frames, jobs)
    return EpsilonNet(space, net.ladder, tuple(frames), Side.SPACE)


def frequency_net(space: Box, ladder, spectra) -> EpsilonNet:
    """A frequency-side net from spectra sampled on the ascending ξ-grid of *space*."""
    freq = space.frequency_box()
    frames = [GridFunction(freq, s) for s in spectra]
    return EpsilonNet(freq, tuple(ladder), tuple(frames), Side.FREQUENCY, space)


# ---------------------------------------------------------------------------
# Normalization audits
# ---------------------------------------------------------------------------

def roundtrip_errors(net: EpsilonNet, boundary_tol: float = 1e-10, jobs: int = 1) -> np.ndarray:
    """Per frame, sup|ift(ft(u)) − u| / sup|u| (0 for a zero frame)."""
    back = ift_net(ft_net(net, boundary_tol, jobs), boundary_tol=math.inf, jobs=jobs)
    return np.array([
        (b - f).sup() / f.sup() if f.sup() > 0 else (b - f).sup()
        for f, b in zip(net.frames, back.frames)
    ])


def plancherel_defects(net: EpsilonNet, boundary_tol: float = 1e-10, jobs: int = 1) -> np.ndarray:
    """Per frame, the relative gap between h^d·Σ|u|² and (2π)^{−d}(Δξ)^d·Σ|û|²."""
    freq = ft_net(net, boundary_tol, jobs)
    scale = freq.box.cell_volume / (2 * math.pi) ** net.box.dim
    out = []
    for f, g in zip(net.frames, freq.frames):
        space = net.box.cell_volume * float(np.sum(np.abs(f.samples) ** 2))
        spectral = scale * float(np.sum(np.abs(g.samples) ** 2))
        out.append(abs(space - spectral) / space if space > 0 else spectral)
    return np.array(out)
