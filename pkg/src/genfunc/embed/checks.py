"""Checks on embedded nets: the G^(1) bound, linearity, commutation with ∂, consistency."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from genfunc.embed.embeddings import (
    EmbeddingKind,
    EmbeddingResult,
    embed,
    embed_iota_CS,
    embed_sigma,
)
from genfunc.errors import PreconditionViolated
from genfunc.grid.box import Box, SubBox
from genfunc.grid.derivatives import Scheme, derivative
from genfunc.grid.function import EpsilonNet, GridFunction
from genfunc.grid.growth import (
    GrowthProfile,
    NegligibilityReport,
    NegligibleMode,
    check_negligible,
    profile_space,
)
from genfunc.mollifier.build import Mollifier
from genfunc.models.distribution import DistributionSpec
from genfunc.scales.classify import clamped, linear_fit
from genfunc.utils.logging import log


# ---------------------------------------------------------------------------
# G^(1) bound
# ---------------------------------------------------------------------------

@dataclass
class G1Report:
    """b̂ = max_l (N̂(l) − l) and the fitted slope of N̂ against N(l) ≤ l + b."""
    label: str
    b_hat: float
    slope: float
    b_max: float
    tol: float
    exponents: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.b_hat <= self.b_max and self.slope <= 1.0 + self.tol


def check_G1(
    result: EmbeddingResult,
    K: SubBox | None = None,
    L: int = 3,
    b_max: float = 3.0,
    tol: float = 0.25,
    floor: float = 1e-13,
    window: int | None = None,
    profile: GrowthProfile | None = None,
) -> G1Report:
    """Whether an embedded distribution satisfies the G^(1) growth bound on K."""
    if result.which not in (EmbeddingKind.IOTA, EmbeddingKind.SIGMA):
        raise PreconditionViolated(f"check_G1 reads iota or sigma nets, got {result.which.value}")
    profile = profile or profile_space(result.net, K, L, floor=floor, window=window)
    exponents = clamped(profile.exponents())
    b_hat = float(np.max(exponents - np.arange(len(exponents))))
    report = G1Report(
        label=result.label,
        b_hat=b_hat,
        slope=linear_fit(exponents).slope,
        b_max=b_max,
        tol=tol,
        exponents=[float(v) for v in profile.exponents()],
    )
    log.info("G1 %s: b=%.3f slope=%.3f -> %s", report.label, b_hat, report.slope,
             "pass" if report.passed else "FAIL")
    return report


# ---------------------------------------------------------------------------
# Structural checks (all read as negligibility of a difference net)
# ---------------------------------------------------------------------------

def _negligible_difference(
    left: EpsilonNet,
    right: EpsilonNet,
    decay: bool,
    K: SubBox | None,
    Q: int,
    m_max: int,
    floor: float,
) -> NegligibilityReport:
    mode = NegligibleMode.DECAY if decay else NegligibleMode.SPACE
    return check_negligible(left - right, mode, K, Q, m_max, floor, reference=right)


def _decays(kind: EmbeddingKind) -> bool:
    return kind in (EmbeddingKind.IOTA_S, EmbeddingKind.IOTA_SPRIME)


def check_linearity(
    first: DistributionSpec,
    second: DistributionSpec,
    a: float,
    b: float,
    kind: EmbeddingKind,
    m: Mollifier,
    ladder,
    box: Box,
    K: SubBox | None = None,
    Q: int = 2,
    m_max: int = 4,
    floor: float = 1e-13,
) -> NegligibilityReport:
    """embed(aT₁ + bT₂) − (a·embed(T₁) + b·embed(T₂)) is negligible."""
    combined = embed(DistributionSpec.combination((a, first), (b, second)), kind, m, ladder, box)
    one = embed(first, kind, m, ladder, box).net
    two = embed(second, kind, m, ladder, box).net
    expected = one.scaled(a) + two.scaled(b)
    return _negligible_difference(combined.net, expected, _decays(kind), K, Q, m_max, floor)


def net_derivative(net: EpsilonNet, axis: int = 0, scheme: Scheme = Scheme.SPECTRAL) -> EpsilonNet:
    return net.map(lambda f, _: derivative(f, axis, 1, scheme))


def check_derivative_commutation(
    spec: DistributionSpec,
    kind: EmbeddingKind,
    m: Mollifier,
    ladder,
    box: Box,
    K: SubBox | None = None,
    Q: int = 2,
    m_max: int = 4,
    floor: float = 1e-13,
) -> NegligibilityReport:
    """∂(embed T) − embed(∂T) is negligible; frames must decay at the boundary.

    The frame derivative is spectral: a finite-difference error on the
    scale of ε^{−1} would not vanish as ε → 0.
    """
    left = net_derivative(embed(spec, kind, m, ladder, box).net)
    right = embed(spec.derivative(), kind, m, ladder, box).net
    return _negligible_difference(left, right, _decays(kind), K, Q, m_max, floor)


def check_consistency(
    spec: DistributionSpec,
    kind: EmbeddingKind,
    m: Mollifier,
    ladder,
    box: Box,
    K: SubBox | None = None,
    Q: int = 2,
    m_max: int = 4,
    floor: float = 1e-13,
) -> NegligibilityReport:
    """ι(f) − σ(f) (space seminorms) or ι_S(f) − σ_S(f) (weighted seminorms)."""
    if kind not in (EmbeddingKind.IOTA, EmbeddingKind.IOTA_S):
        raise PreconditionViolated("consistency is stated for iota and iota_S")
    embedded = embed(spec, kind, m, ladder, box).net
    plain = embed_sigma(spec, ladder, box).net
    report = _negligible_difference(embedded, plain, _decays(kind), K, Q, m_max, floor)
    log.info("Consistency %s(%s) vs sigma: %s", kind.value, spec.name,
             "negligible" if report.passed else "NOT negligible")
    return report


def check_cutoff_independence(
    net: EpsilonNet,
    first: GridFunction,
    second: GridFunction,
    Q: int = 2,
    m_max: int = 4,
    floor: float = 1e-13,
) -> NegligibilityReport:
    """κ₁·u − κ₂·u is negligible for two cutoffs ≡ 1 near the common support."""
    one = embed_iota_CS(net, first).net
    two = embed_iota_CS(net, second).net
    return _negligible_difference(one, two, True, None, Q, m_max, floor)
