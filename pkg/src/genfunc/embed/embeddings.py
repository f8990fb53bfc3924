"""The embeddings σ, ι, ι_S, ι_{S′} and ι_{C,S} of catalog distributions into nets."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import partial

import numpy as np

from genfunc.embed.catalog import convolve, sample
from genfunc.errors import PreconditionViolated, SupportNotContained
from genfunc.grid.box import Box
from genfunc.grid.function import EpsilonNet, GridFunction
from genfunc.grid.growth import check_decay_regime
from genfunc.mollifier.build import Mollifier, rho_eps, theta_derivative
from genfunc.models.distribution import ClassTag, DistributionSpec
from genfunc.utils.logging import log
from genfunc.utils.parallel import ordered_map


class EmbeddingKind(str, Enum):
    """Which embedding produced a net."""
    SIGMA = "sigma"
    IOTA = "iota"
    IOTA_S = "iota_S"
    IOTA_SPRIME = "iota_Sprime"
    IOTA_CS = "iota_CS"


@dataclass(frozen=True, eq=False)
class EmbeddingResult:
    """An embedded net with the catalog entry it came from."""
    net: EpsilonNet
    which: EmbeddingKind
    source: DistributionSpec | None = None

    @property
    def label(self) -> str:
        name = self.source.name if self.source is not None else "net"
        return f"{self.which.value}({name})"


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

def _theta_kernel(m: Mollifier, eps: float, box: Box, order: int, center: float) -> np.ndarray:
    return theta_derivative(m, eps, box, (order,), (center,)).samples


def _rho_kernel(m: Mollifier, eps: float, box: Box, order: int, center: float) -> np.ndarray:
    return rho_eps(m, eps, box, (center,), (order,)).samples


def plateau_factor(m: Mollifier, eps: float, box: Box) -> np.ndarray:
    """ρ̂_ε sampled in space, ψ(εx), as a tensor product over the axes."""
    values = np.ones(box.shape)
    for x in box.mesh():
        values = values * m.spectrum(eps * x)
    return values


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

def embed_sigma(spec: DistributionSpec, ladder, box: Box) -> EmbeddingResult:
    """The constant net f_ε = f."""
    frame = sample(spec, box)
    return EmbeddingResult(EpsilonNet.constant(frame, ladder), EmbeddingKind.SIGMA, spec)


def embed_iota(
    spec: DistributionSpec,
    m: Mollifier,
    ladder,
    box: Box,
    jobs: int = 1,
) -> EmbeddingResult:
    """T ↦ (T∗θ_ε)_ε with κ ≡ 1 on the box."""
    def frame(eps: float) -> GridFunction:
        log.debug("iota(%s): eps=%.3g", spec.name, eps)
        return convolve(spec, partial(_theta_kernel, m, eps), box)

    net = EpsilonNet.from_frames(box, ladder, ordered_map(frame, ladder, jobs))
    log.info("Embedded %s with iota over %d eps values", spec.name, len(net.ladder))
    return EmbeddingResult(net, EmbeddingKind.IOTA, spec)


def embed_iota_S(
    spec: DistributionSpec,
    m: Mollifier,
    ladder,
    box: Box,
    boundary_tol: float = 1e-10,
    jobs: int = 1,
) -> EmbeddingResult:
    """u ↦ (u∗ρ_ε)_ε for u ∈ O′_C, with no extra cutoff."""
    if not spec.has(ClassTag.OC_PRIME):
        raise PreconditionViolated(f"iota_S takes entries in O'_C; {spec.name} is not")

    def frame(eps: float) -> GridFunction:
        return convolve(spec, partial(_rho_kernel, m, eps), box)

    net = EpsilonNet.from_frames(box, ladder, ordered_map(frame, ladder, jobs))
    check_decay_regime(net, boundary_tol)
    log.info("Embedded %s with iota_S over %d eps values", spec.name, len(net.ladder))
    return EmbeddingResult(net, EmbeddingKind.IOTA_S, spec)


def embed_iota_Sprime(
    spec: DistributionSpec,
    m: Mollifier,
    ladder,
    box: Box,
    boundary_tol: float = 1e-10,
    jobs: int = 1,
) -> EmbeddingResult:
    """u ↦ ((u∗ρ_ε)·ψ(ε·))_ε for u ∈ S′."""
    if not spec.has(ClassTag.S_PRIME):
        raise PreconditionViolated(f"iota_Sprime takes entries in S'; {spec.name} is not")

    def frame(eps: float) -> GridFunction:
        smoothed = convolve(spec, partial(_rho_kernel, m, eps), box)
        return GridFunction(box, smoothed.samples * plateau_factor(m, eps, box))

    net = EpsilonNet.from_frames(box, ladder, ordered_map(frame, ladder, jobs))
    check_decay_regime(net, boundary_tol)
    log.info("Embedded %s with iota_Sprime over %d eps values", spec.name, len(net.ladder))
    return EmbeddingResult(net, EmbeddingKind.IOTA_SPRIME, spec)


def embed_iota_CS(
    net: EpsilonNet,
    kappa: GridFunction,
    source: DistributionSpec | None = None,
    tol: float = 1e-10,
) -> EmbeddingResult:
    """(κ·u_ε)_ε for a net whose frames share a support inside κ's plateau."""
    if kappa.box != net.box:
        raise PreconditionViolated("cutoff and net live on different boxes")
    outside = np.abs(1.0 - kappa.samples)
    for eps, frame in zip(net.ladder, net.frames):
        excess = float(np.max(np.abs(frame.samples) * outside))
        if excess > tol * max(frame.sup(), 1.0):
            raise SupportNotContained(
                f"frame at eps={eps:.3g} reaches {excess:.2e} outside the cutoff plateau"
            )
    return EmbeddingResult(net.times(kappa), EmbeddingKind.IOTA_CS, source)


def embed(
    spec: DistributionSpec,
    kind: EmbeddingKind,
    m: Mollifier,
    ladder,
    box: Box,
    jobs: int = 1,
) -> EmbeddingResult:
    """Dispatch to one of the catalog embeddings (ι_{C,S} takes a net, not a spec)."""
    match EmbeddingKind(kind):
        case EmbeddingKind.SIGMA:
            return embed_sigma(spec, ladder, box)
        case EmbeddingKind.IOTA:
            return embed_iota(spec, m, ladder, box, jobs=jobs)
        case EmbeddingKind.IOTA_S:
            return embed_iota_S(spec, m, ladder, box, jobs=jobs)
        case EmbeddingKind.IOTA_SPRIME:
            return embed_iota_Sprime(spec, m, ladder, box, jobs=jobs)
    raise PreconditionViolated("iota_CS embeds a net; call embed_iota_CS")
