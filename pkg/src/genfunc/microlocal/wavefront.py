"""Singular support, cone-localized decay and the wavefront of a net.

A pair (x₀, Γ) is microregular when some cutoff φ centered at x₀ makes the
transform of φ·u rough-regular on Γ; the wavefront is every tested pair that
is not.  The singular support is estimated separately on the space side by
classifying the net on small windows, and the two are compared.
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import ndimage

from genfunc.errors import ConeTooThin, InsufficientPoints, PreconditionViolated
from genfunc.fourier.transform import ft_net
from genfunc.grid.box import Box, SubBox
from genfunc.grid.derivatives import Scheme
from genfunc.grid.function import EpsilonNet, GridFunction, Side
from genfunc.grid.growth import GrowthProfile, ProfileAxis, assemble_profile
from genfunc.grid.seminorms import MAX_WEIGHT, weight, window_sups
from genfunc.microlocal.cones import Cone, CutoffFamily, default_cones, sector_labels
from genfunc.scales.classify import in_family, membership_margin
from genfunc.scales.families import RegularScaleFamily
from genfunc.utils.logging import log
from genfunc.utils.parallel import ordered_map

MIN_CONE_NODES = 32

Point = tuple[float, ...]


# ---------------------------------------------------------------------------
# Cone profiles
# ---------------------------------------------------------------------------

def cone_profiles(
    freq_net: EpsilonNet,
    cones: list[Cone],
    Q: int = 4,
    floor: float = 1e-13,
    window: int | None = None,
) -> list[GrowthProfile]:
    """q ↦ N̂(q) of sup over each cone of (1+|ξ|)^q·|û_ε(ξ)|, one profile per cone.

    A weight whose sups reach the floor too early for a fit counts as decayed.
    """
    if freq_net.side is not Side.FREQUENCY:
        raise PreconditionViolated("cone profiles take a frequency-side net")
    if not 0 <= Q <= MAX_WEIGHT:
        raise PreconditionViolated(f"weight order {Q} outside 0..{MAX_WEIGHT}")
    freq = freq_net.box
    labels = sector_labels(freq, tuple(cones))
    counts = np.bincount(labels.ravel(), minlength=len(cones) + 1)[1:]
    thin = [c.label for c, k in zip(cones, counts) if k < MIN_CONE_NODES]
    if thin:
        raise ConeTooThin(
            f"cones {thin} hold fewer than {MIN_CONE_NODES} nodes beyond the exclusion radius"
        )
    index = np.arange(1, len(cones) + 1)

    def sups(frame: GridFunction) -> np.ndarray:
        mag = np.abs(frame.samples)
        return np.array([
            ndimage.maximum(weight(freq, q) * mag, labels, index) for q in range(Q + 1)
        ])

    stack = np.stack([sups(f) for f in freq_net.frames])
    return [
        assemble_profile(
            ProfileAxis.WEIGHT_Q, list(stack[:, :, i]), freq_net.ladder, floor, window,
            strict=False,
        )
        for i in range(len(cones))
    ]


def cone_profile(
    freq_net: EpsilonNet,
    cone: Cone,
    Q: int = 4,
    floor: float = 1e-13,
    window: int | None = None,
) -> GrowthProfile:
    return cone_profiles(freq_net, [cone], Q, floor, window)[0]


def localized_spectrum(
    u: EpsilonNet,
    cutoffs: CutoffFamily,
    center: Point,
    radius: float,
    boundary_tol: float = 1e-10,
) -> EpsilonNet:
    """The transform of φ·u for the bump φ of *radius* at *center*."""
    phi = cutoffs.cutoff(u.box, center, radius)
    return ft_net(u.times(phi), boundary_tol)


# ---------------------------------------------------------------------------
# Decisions
# ---------------------------------------------------------------------------

class Decision(BaseModel):
    """Membership of one profile; ``margin`` is None when it is unbounded or undefined."""

    model_config = ConfigDict(frozen=True)

    in_family: bool
    margin: float | None


def decide(
    profile: GrowthProfile,
    family: RegularScaleFamily,
    tol: float = 0.25,
    b_max: float = 3.0,
    residual_limit: float = 0.3,
) -> Decision:
    verdict = in_family(profile, family, tol, b_max, residual_limit)
    margin = membership_margin(profile, family, tol, b_max)
    return Decision(in_family=verdict, margin=margin if math.isfinite(margin) else None)


def microregular(
    u: EpsilonNet,
    x0: Point,
    cone: Cone,
    family: RegularScaleFamily,
    cutoffs: CutoffFamily,
    Q: int = 4,
    tol: float = 0.25,
    b_max: float = 3.0,
    residual_limit: float = 0.3,
    floor: float = 1e-13,
    window: int | None = None,
    boundary_tol: float = 1e-10,
) -> bool:
    """True iff some radius in the cutoff family makes the cone profile land in *family*."""
    x0 = tuple(float(c) for c in x0)
    if not any(np.allclose(x0, c) for c in cutoffs.centers):
        raise PreconditionViolated(f"{x0} is not a cutoff center")
    for radius in cutoffs.radii:
        spectrum = localized_spectrum(u, cutoffs, x0, radius, boundary_tol)
        profile = cone_profile(spectrum, cone, Q, floor, window)
        if in_family(profile, family, tol, b_max, residual_limit):
            log.debug("%s regular on cone %s at radius %g", x0, cone.label, radius)
            return True
    return False


# ---------------------------------------------------------------------------
# Singular support
# ---------------------------------------------------------------------------

class WindowVerdict(BaseModel):
    """Space-side classification of the net on a small window around one center."""

    model_config = ConfigDict(frozen=True)

    center: Point
    flagged: bool
    margin: float | None
    profile: GrowthProfile | None = None


def usable_centers(box: Box, cutoffs: CutoffFamily) -> list[Point]:
    """Centers whose largest bump stays strictly inside the box."""
    last = [b - s for b, s in zip(box.hi, box.spacing)]
    reach = cutoffs.radii[0]
    kept = [
        c for c in cutoffs.centers
        if all(lo + reach < x < top - reach for x, lo, top in zip(c, box.lo, last))
    ]
    if len(kept) < len(cutoffs.centers):
        log.warning(
            "dropped %d centers whose cutoff of radius %g leaves the box",
            len(cutoffs.centers) - len(kept), reach,
        )
    return kept


def singular_support(
    u: EpsilonNet,
    family: RegularScaleFamily,
    centers: list[Point],
    half_width: float,
    L: int = 3,
    tol: float = 0.25,
    b_max: float = 3.0,
    residual_limit: float = 0.3,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
    window: int | None = None,
    jobs: int = 1,
) -> list[WindowVerdict]:
    """Flag every window around a center where the local space profile leaves *family*.

    Windows whose values drop to the floor too early for a fit are decaying
    and are not flagged; windows that do not fit a power law are flagged.
    """
    if u.side is not Side.SPACE:
        raise PreconditionViolated("singular support takes a space-side net")
    windows = [SubBox.around(c, half_width) for c in centers]
    per_frame = ordered_map(lambda f: window_sups(f, windows, L, scheme, floor), u.frames, jobs)
    stack = np.stack(per_frame)

    verdicts = []
    for i, center in enumerate(centers):
        try:
            profile = assemble_profile(
                ProfileAxis.SPACE_L, list(stack[:, i, :]), u.ladder, floor, window
            )
        except InsufficientPoints:
            log.debug("window at %s reaches the floor, treated as smooth", center)
            verdicts.append(WindowVerdict(center=center, flagged=False, margin=None))
            continue
        decision = decide(profile, family, tol, b_max, residual_limit)
        verdicts.append(WindowVerdict(
            center=center,
            flagged=not decision.in_family,
            margin=decision.margin,
            profile=profile,
        ))
    log.info(
        "singular support for %s: %d of %d windows flagged",
        family.label, sum(v.flagged for v in verdicts), len(centers),
    )
    return verdicts


# ---------------------------------------------------------------------------
# Wavefront
# ---------------------------------------------------------------------------

class FlaggedPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    center: Point
    cone: str

    @property
    def key(self) -> tuple[Point, str]:
        return (self.center, self.cone)


class WavefrontEntry(BaseModel):
    """The decision for one (center, cone, radius)."""

    model_config = ConfigDict(frozen=True)

    center: Point
    cone: str
    theta1: float
    theta2: float
    radius: float
    profile: GrowthProfile
    in_family: bool
    margin: float | None


class WavefrontReport(BaseModel):
    """Per (center, cone, radius) decisions and the sets derived from them.

    Rules
    -----
    1. ``wavefront`` holds the pairs no tested radius makes regular.
    2. ``smallest_radius_wavefront`` holds the pairs irregular at the
       smallest radius alone.
    3. ``singsupp_estimate`` comes from the space-side windows, independently.
    """

    family: RegularScaleFamily
    cones: list[Cone]
    radii: tuple[float, ...]
    spacing: float
    full_scan: bool
    windows: list[WindowVerdict]
    entries: list[WavefrontEntry]
    wavefront: list[FlaggedPair]
    smallest_radius_wavefront: list[FlaggedPair]
    singsupp_estimate: list[Point]

    def wavefront_centers(self) -> list[Point]:
        return sorted({p.center for p in self.wavefront})

    def flagged_keys(self) -> set[tuple[Point, str]]:
        return {p.key for p in self.wavefront}

    @property
    def passed(self) -> bool:
        return check_projection(self)

    def rows(self) -> list[dict]:
        """(center, θ₁, θ₂, radius, q, exponent) rows for CSV export."""
        out = []
        for e in self.entries:
            for p in e.profile.entries:
                out.append({
                    **{f"x{i + 1}": c for i, c in enumerate(e.center)},
                    "cone_theta1": e.theta1,
                    "cone_theta2": e.theta2,
                    "radius": e.radius,
                    "q": p.index[0],
                    "exponent": p.n_hat,
                    "in_family": int(e.in_family),
                })
        return out


def _candidates(cutoffs: CutoffFamily, flagged: list[Point], usable: list[Point]) -> list[Point]:
    pool = set()
    for c in flagged:
        pool.update(cutoffs.neighbours(c))
    return sorted(c for c in usable if c in pool)


def wavefront(
    u: EpsilonNet,
    family: RegularScaleFamily,
    cutoffs: CutoffFamily | None = None,
    cones: list[Cone] | None = None,
    Q: int = 4,
    L: int = 3,
    tol: float = 0.25,
    b_max: float = 3.0,
    residual_limit: float = 0.3,
    floor: float = 1e-13,
    window: int | None = None,
    boundary_tol: float = 1e-10,
    full_scan: bool = False,
    jobs: int = 1,
) -> WavefrontReport:
    """Decide microregularity over centers × cones × radii and estimate the singular support.

    Unless *full_scan* is set, only the flagged singular-support centers and
    their one-cell halo are localized in frequency.
    """
    if u.side is not Side.SPACE:
        raise PreconditionViolated("wavefront takes a space-side net")
    cutoffs = cutoffs or CutoffFamily.regular(u.box.dim, 0.25, 2.0, 0.5)
    cones = cones or default_cones(u.box)
    if cutoffs.dim != u.box.dim or any(c.dim != u.box.dim for c in cones):
        raise PreconditionViolated("cutoffs and cones must match the net's dimension")

    usable = usable_centers(u.box, cutoffs)
    windows = singular_support(
        u, family, usable, cutoffs.spacing / 2, L, tol, b_max, residual_limit,
        floor=floor, window=window, jobs=jobs,
    )
    singsupp = [v.center for v in windows if v.flagged]
    centers = usable if full_scan else _candidates(cutoffs, singsupp, usable)
    tasks = [(c, r) for c in centers for r in cutoffs.radii]
    log.info(
        "wavefront for %s: %d centers x %d radii x %d cones",
        family.label, len(centers), len(cutoffs.radii), len(cones),
    )

    def run(task: tuple[Point, float]) -> list[WavefrontEntry]:
        center, radius = task
        spectrum = localized_spectrum(u, cutoffs, center, radius, boundary_tol)
        profiles = cone_profiles(spectrum, cones, Q, floor, window)
        entries = []
        for cone, profile in zip(cones, profiles):
            decision = decide(profile, family, tol, b_max, residual_limit)
            theta1, theta2 = cone.bounds()
            entries.append(WavefrontEntry(
                center=center, cone=cone.label, theta1=theta1, theta2=theta2,
                radius=radius, profile=profile,
                in_family=decision.in_family, margin=decision.margin,
            ))
        log.debug("center %s radius %g done", center, radius)
        return entries

    by_task = dict(zip(tasks, ordered_map(run, tasks, jobs)))
    entries: list[WavefrontEntry] = []
    flagged: list[FlaggedPair] = []
    smallest: list[FlaggedPair] = []
    for center in centers:
        for k, cone in enumerate(cones):
            per_radius = [by_task[(center, r)][k] for r in cutoffs.radii]
            entries.extend(per_radius)
            pair = FlaggedPair(center=center, cone=cone.label)
            if not any(e.in_family for e in per_radius):
                flagged.append(pair)
            if not per_radius[-1].in_family:
                smallest.append(pair)

    report = WavefrontReport(
        family=family,
        cones=cones,
        radii=cutoffs.radii,
        spacing=cutoffs.spacing,
        full_scan=full_scan,
        windows=windows,
        entries=entries,
        wavefront=flagged,
        smallest_radius_wavefront=smallest,
        singsupp_estimate=singsupp,
    )
    log.info(
        "wavefront for %s: %d flagged pairs over %d centers, singular support %s",
        family.label, len(flagged), len(report.wavefront_centers()), singsupp,
    )
    return report


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def _near(a: Point, b: Point, reach: float) -> bool:
    return max(abs(x - y) for x, y in zip(a, b)) <= reach * (1.0 + 1e-9)


def check_projection(report: WavefrontReport) -> bool:
    """Wavefront centers and the singular support agree up to one cell either way.

    Without ``full_scan`` the wavefront only visits the singular-support halo, so
    the wavefront-inside-support half holds by construction; only a full-scan
    report tests both halves.
    """
    fronts = report.wavefront_centers()
    supp = report.singsupp_estimate
    reach = report.spacing
    covered = all(any(_near(w, s, reach) for s in supp) for w in fronts)
    covering = all(any(_near(s, w, reach) for w in fronts) for s in supp)
    return covered and covering


def check_cutoff_monotonicity(
    u: EpsilonNet,
    phi: GridFunction,
    cones: list[Cone],
    family: RegularScaleFamily,
    Q: int = 4,
    tol: float = 0.25,
    b_max: float = 3.0,
    residual_limit: float = 0.3,
    floor: float = 1e-13,
    window: int | None = None,
    boundary_tol: float = 1e-10,
) -> bool:
    """Every cone regular for u stays regular for φ·u."""
    before = cone_profiles(ft_net(u, boundary_tol), cones, Q, floor, window)
    after = cone_profiles(ft_net(u.times(phi), boundary_tol), cones, Q, floor, window)
    lost = [
        cone.label
        for cone, p, q in zip(cones, before, after)
        if in_family(p, family, tol, b_max, residual_limit)
        and not in_family(q, family, tol, b_max, residual_limit)
    ]
    if lost:
        log.warning("cones %s lost %s regularity under the cutoff", lost, family.label)
    return not lost


def check_family_monotonicity(reports: list[WavefrontReport]) -> bool:
    """Flagged sets shrink as the family grows along B ⊂ R1 ⊂ Ra ⊂ Full."""
    ordered = sorted(reports, key=lambda r: r.family.rank)
    for small, large in zip(ordered, ordered[1:]):
        extra = large.flagged_keys() - small.flagged_keys()
        if extra:
            log.warning(
                "%s flags %d pairs %s does not", large.family.label, len(extra), small.family.label
            )
            return False
    return True


def radius_violations(report: WavefrontReport, tol: float = 0.25) -> list[WavefrontEntry]:
    """Entries irregular at a radius although the next larger radius was regular by more than tol.

    These are reported, not raised: localizing further should only help.
    """
    out = []
    radii = list(report.radii)
    grouped: dict[tuple[Point, str], dict[float, WavefrontEntry]] = {}
    for e in report.entries:
        grouped.setdefault((e.center, e.cone), {})[e.radius] = e
    for per_radius in grouped.values():
        for larger, smaller in zip(radii, radii[1:]):
            big, small = per_radius[larger], per_radius[smaller]
            if big.in_family and not small.in_family and (big.margin or 0.0) > tol:
                out.append(small)
    return out
