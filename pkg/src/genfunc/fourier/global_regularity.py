"""Rough profiles and the global regularity characterization of compactly supported nets."""

from __future__ import annotations

from dataclasses import dataclass, field

from pydantic import BaseModel

from genfunc.embed.embeddings import embed_iota_S, embed_iota_CS
from genfunc.errors import PreconditionViolated
from genfunc.fourier.exchange import is_flat
from genfunc.fourier.transform import ft_net, ift_net
from genfunc.grid.box import Box, SubBox
from genfunc.grid.function import EpsilonNet, GridFunction, Side
from genfunc.grid.growth import (
    GrowthProfile,
    ProfileAxis,
    assemble_profile,
    profile_decay,
    profile_space,
)
from genfunc.grid.seminorms import seminorm_table
from genfunc.mollifier.build import Mollifier
from genfunc.models.distribution import ClassTag, DistributionSpec
from genfunc.scales.classify import Classification, classify_profile, in_family
from genfunc.utils.logging import log
from genfunc.utils.parallel import ordered_map


def rough_profile(
    freq_net: EpsilonNet,
    Q: int = 6,
    floor: float = 1e-13,
    window: int | None = None,
    jobs: int = 1,
) -> GrowthProfile:
    """q ↦ N̂(q) for μ_{q,0}: weighted sups with no derivatives."""
    if freq_net.side is not Side.FREQUENCY:
        raise PreconditionViolated("rough_profile takes a frequency-side net")
    per_frame = ordered_map(
        lambda f: seminorm_table(f, Q, 0, floor=floor)[:, 0], freq_net.frames, jobs
    )
    return assemble_profile(ProfileAxis.WEIGHT_Q, per_frame, freq_net.ladder, floor, window)


def bounded_profile(
    net: EpsilonNet,
    L: int = 3,
    floor: float = 1e-13,
    window: int | None = None,
    jobs: int = 1,
) -> GrowthProfile:
    """l ↦ N̂(l) for μ_{0,l}: unweighted sups of derivatives over the whole box."""
    per_frame = ordered_map(lambda f: seminorm_table(f, 0, L, floor=floor)[0], net.frames, jobs)
    return assemble_profile(ProfileAxis.SPACE_L, per_frame, net.ladder, floor, window)


# ---------------------------------------------------------------------------
# Global characterization
# ---------------------------------------------------------------------------

class GlobalReport(BaseModel):
    """Space-side and Fourier-side classifications of one compactly supported net."""

    space: Classification
    fourier: Classification
    space_profile: GrowthProfile
    fourier_profile: GrowthProfile

    @property
    def agree(self) -> bool:
        return self.space.family == self.fourier.family

    @property
    def passed(self) -> bool:
        return self.agree


def classify_global(
    net: EpsilonNet,
    kappa: GridFunction,
    Q: int = 4,
    L: int = 3,
    K: SubBox | None = None,
    tol: float = 0.25,
    b_max: float = 3.0,
    a_grid: list[float] | None = None,
    residual_limit: float = 0.3,
    floor: float = 1e-13,
    boundary_tol: float = 1e-10,
    window: int | None = None,
    jobs: int = 1,
) -> GlobalReport:
    """Classify u by its space profile and by the rough profile of F(κ·u)."""
    cut = embed_iota_CS(net, kappa).net
    space_profile = profile_space(net, K, L, floor=floor, window=window, jobs=jobs)
    fourier_profile = rough_profile(ft_net(cut, boundary_tol, jobs), Q, floor, window, jobs)
    report = GlobalReport(
        space=classify_profile(space_profile, tol, b_max, a_grid, residual_limit),
        fourier=classify_profile(fourier_profile, tol, b_max, a_grid, residual_limit),
        space_profile=space_profile,
        fourier_profile=fourier_profile,
    )
    log.info("Global: space side %s, Fourier side %s", report.space.label, report.fourier.label)
    return report


@dataclass
class SmallExchangeReport:
    """Family of a rough frequency net and whether its inverse transform stays in it."""
    rough: Classification
    inverse_profile: GrowthProfile
    passed: bool


def check_small_exchange(
    freq_net: EpsilonNet,
    L: int = 3,
    Q: int = 4,
    tol: float = 0.25,
    b_max: float = 3.0,
    residual_limit: float = 0.3,
    floor: float = 1e-13,
    boundary_tol: float = 1e-10,
    jobs: int = 1,
) -> SmallExchangeReport:
    """The μ_{0,l} profile of F⁻¹û lies in the family of the rough profile of û."""
    rough = classify_profile(rough_profile(freq_net, Q, floor, jobs=jobs), tol, b_max,
                             residual_limit=residual_limit)
    inverse = bounded_profile(ift_net(freq_net, boundary_tol, jobs), L, floor, jobs=jobs)
    passed = in_family(inverse, rough.family, tol, b_max, residual_limit)
    return SmallExchangeReport(rough=rough, inverse_profile=inverse, passed=passed)


# ---------------------------------------------------------------------------
# Catalog identity: O′_C ∩ G_S^∞ = S
# ---------------------------------------------------------------------------

@dataclass
class IdentityRow:
    name: str
    flat: bool
    tagged_s: bool

    @property
    def agree(self) -> bool:
        return self.flat == self.tagged_s


@dataclass
class IdentityReport:
    """ι_S(u) has a flat two-index profile exactly for the entries tagged S."""
    rows: list[IdentityRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.agree for r in self.rows)


def check_rough_regularity_identity(
    entries: list[DistributionSpec],
    m: Mollifier,
    ladder,
    box: Box,
    Q: int = 4,
    L: int = 2,
    tol: float = 0.25,
    floor: float = 1e-13,
    jobs: int = 1,
) -> IdentityReport:
    report = IdentityReport()
    for spec in entries:
        if not spec.has(ClassTag.OC_PRIME):
            log.debug("skipping %s: not in O'_C", spec.name)
            continue
        net = embed_iota_S(spec, m, ladder, box, jobs=jobs).net
        flat = is_flat(profile_decay(net, Q, L, floor=floor, jobs=jobs), tol)
        report.rows.append(IdentityRow(spec.name, flat, spec.has(ClassTag.S)))
    return report
