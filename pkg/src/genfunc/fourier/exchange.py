"""The seminorm inequality behind the exchange theorem and the signature checks."""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, Field

from genfunc.errors import DivisionByFloor, PreconditionViolated
from genfunc.fourier.transform import ft_net, ift_net
from genfunc.grid.derivatives import Scheme
from genfunc.grid.function import EpsilonNet, Side
from genfunc.grid.growth import GrowthProfile, profile_decay
from genfunc.grid.seminorms import seminorm_table
from genfunc.scales.families import finite_table, l_variation, q_variation
from genfunc.utils.logging import log
from genfunc.utils.parallel import ordered_map


class Signature(str, Enum):
    """Which index a two-index growth profile is uniform in."""
    R_U = "R_u"
    R_D = "R_d"
    BOTH = "both"
    NEITHER = "neither"


def signature(profile: GrowthProfile, tol: float = 0.25) -> Signature:
    """R_u: N̂ independent of q; R_d: independent of l; both: flat."""
    table = profile.exponents()
    u = q_variation(table) <= tol
    d = l_variation(table) <= tol
    if u and d:
        return Signature.BOTH
    if u:
        return Signature.R_U
    if d:
        return Signature.R_D
    return Signature.NEITHER


_SWAPS = {
    Signature.R_U: {Signature.R_D, Signature.BOTH},
    Signature.R_D: {Signature.R_U, Signature.BOTH},
    Signature.BOTH: {Signature.BOTH},
    Signature.NEITHER: set(),
}


def is_flat(profile: GrowthProfile, tol: float = 0.25) -> bool:
    """All exponents within *tol* of each other (the G_S^∞ shape)."""
    table = finite_table(profile.exponents())
    return bool(np.ptp(table) <= tol)


# ---------------------------------------------------------------------------
# Exchange
# ---------------------------------------------------------------------------

class ExchangeReport(BaseModel):
    """Signatures of a net and of its transform.

    Rules
    -----
    1. R_u ↦ R_d or both, R_d ↦ R_u or both, both ↦ both pass.
    2. An input with neither signature fails.
    3. ``uniformity_defect`` is the largest variation the pass condition needs
       to be within tolerance.
    """

    input_signature: Signature
    output_signature: Signature
    input_q_variation: float
    input_l_variation: float
    output_q_variation: float
    output_l_variation: float
    uniformity_defect: float
    tol: float
    passed: bool
    input_profile: GrowthProfile
    output_profile: GrowthProfile


def _defect(sig_in: Signature, qin: float, lin: float, qout: float, lout: float) -> float:
    match sig_in:
        case Signature.R_U:
            return max(qin, lout)
        case Signature.R_D:
            return max(lin, qout)
        case Signature.BOTH:
            return max(qin, lin, qout, lout)
    return min(qin, lin)


def check_exchange(
    net: EpsilonNet,
    Q: int = 4,
    L: int = 2,
    tol: float = 0.25,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
    boundary_tol: float = 1e-10,
    window: int | None = None,
    jobs: int = 1,
) -> ExchangeReport:
    """Profile a net and its transform (F for space input, F⁻¹ for frequency input)."""
    other = (
        ft_net(net, boundary_tol, jobs) if net.side is Side.SPACE
        else ift_net(net, boundary_tol, jobs)
    )
    before = profile_decay(net, Q, L, scheme, floor, boundary_tol, window, jobs)
    after = profile_decay(other, Q, L, scheme, floor, boundary_tol, window, jobs)
    sig_in, sig_out = signature(before, tol), signature(after, tol)
    tin, tout = before.exponents(), after.exponents()
    qin, lin = q_variation(tin), l_variation(tin)
    qout, lout = q_variation(tout), l_variation(tout)
    report = ExchangeReport(
        input_signature=sig_in,
        output_signature=sig_out,
        input_q_variation=qin,
        input_l_variation=lin,
        output_q_variation=qout,
        output_l_variation=lout,
        uniformity_defect=_defect(sig_in, qin, lin, qout, lout),
        tol=tol,
        passed=sig_out in _SWAPS[sig_in],
        input_profile=before,
        output_profile=after,
    )
    log.info("Exchange: %s -> %s (%s)", sig_in.value, sig_out.value,
             "pass" if report.passed else "FAIL")
    return report


def check_regularity_theorem(
    net: EpsilonNet,
    Q: int = 4,
    L: int = 2,
    tol: float = 0.25,
    floor: float = 1e-13,
    boundary_tol: float = 1e-10,
    jobs: int = 1,
) -> bool:
    """A flat two-index profile stays flat under the transform."""
    before = profile_decay(net, Q, L, floor=floor, boundary_tol=boundary_tol, jobs=jobs)
    if not is_flat(before, tol):
        raise PreconditionViolated(
            "input profile is not flat; the net is not in G_S^inf at this resolution"
        )
    after = profile_decay(ft_net(net, boundary_tol, jobs), Q, L, floor=floor,
                          boundary_tol=boundary_tol, jobs=jobs)
    return is_flat(after, tol)


# ---------------------------------------------------------------------------
# Seminorm inequality
# ---------------------------------------------------------------------------

class LemmaReport(BaseModel):
    """Ratios r_ε = μ_{q,l}(û_ε)/μ_{l+d+1,q}(u_ε) per (q, l), one value per ε."""

    ladder: list[float]
    ratios: dict[str, list[float]] = Field(default_factory=dict)
    envelope: dict[str, float] = Field(default_factory=dict)
    factor: float = 10.0

    @property
    def passed(self) -> bool:
        return all(
            math.isfinite(v) and v <= self.factor for v in self.envelope.values()
        ) and all(all(math.isfinite(r) for r in rs) for rs in self.ratios.values())


def check_lemma_bound(
    net: EpsilonNet,
    Q: int = 3,
    L: int = 2,
    factor: float = 10.0,
    floor: float = 1e-13,
    boundary_tol: float = 1e-10,
    jobs: int = 1,
) -> LemmaReport:
    """The transform's weighted seminorms stay within an ε-free multiple of the input's.

    The envelope of an index is max_ε r_ε / r_{ε₀} (ε₀ the largest ε): the
    ratio may fall as ε → 0 but never rise past *factor* times its start.
    """
    if net.side is not Side.SPACE:
        raise PreconditionViolated("check_lemma_bound takes a space-side net")
    d = net.box.dim
    freq = ft_net(net, boundary_tol, jobs)
    hat = ordered_map(lambda f: seminorm_table(f, Q, L, floor=floor), freq.frames, jobs)
    base = ordered_map(lambda f: seminorm_table(f, L + d + 1, Q, floor=floor), net.frames, jobs)

    report = LemmaReport(ladder=list(net.ladder), factor=factor)
    for q in range(Q + 1):
        for l in range(L + 1):
            ratios = []
            for eps, top, bottom in zip(net.ladder, hat, base):
                denominator = bottom[l + d + 1, q]
                if denominator <= floor:
                    raise DivisionByFloor(
                        f"mu_{{{l + d + 1},{q}}} at eps={eps:.3g} is below the floor"
                    )
                ratios.append(float(top[q, l] / denominator))
            key = f"{q},{l}"
            report.ratios[key] = ratios
            report.envelope[key] = max(ratios) / ratios[0]
    log.info("Lemma bound over (q,l) <= (%d,%d): %s", Q, L, "pass" if report.passed else "FAIL")
    return report
