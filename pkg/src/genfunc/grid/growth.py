"""Asymptotic exponent regression, growth profiles and the negligibility test.

A seminorm sequence v_ε is read as C·ε^{−N}: the exponent N̂ is the slope of
ln v against ln(1/ε).  Values below the floor are numerical zeros; when more
than half the ladder is at the floor the exponent is the −∞ sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from genfunc.errors import BoundaryDecayViolation, InsufficientPoints, PreconditionViolated
from genfunc.grid.box import SubBox
from genfunc.grid.derivatives import Scheme, boundary_ratio
from genfunc.grid.function import EpsilonNet, Side
from genfunc.grid.seminorms import seminorm_orders, seminorm_table, weight
from genfunc.utils.logging import log
from genfunc.utils.parallel import ordered_map

MIN_LADDER = 6
MIN_POINTS = 4


# ---------------------------------------------------------------------------
# Regression
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthFit:
    """One fitted exponent: values ≈ exp(intercept)·ε^{−exponent}."""
    exponent: float
    intercept: float
    residual: float
    used: int

    @property
    def negligible(self) -> bool:
        return self.exponent == -math.inf


def loglog_fit(ladder, values) -> tuple[float, float, float]:
    """Least-squares line through (ln 1/ε, ln v); returns (slope, intercept, rms in decades)."""
    x = np.log(1.0 / np.asarray(ladder, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), float(intercept), rms / math.log(10.0)


def fit_growth(
    values,
    ladder,
    floor: float | np.ndarray = 1e-13,
    window: int | None = None,
) -> GrowthFit:
    """Fit the growth exponent N̂ of a per-ε value sequence.

    Parameters
    ----------
    values:
        One nonnegative value per ladder entry.
    ladder:
        Strictly decreasing ε values, at least six.
    floor:
        Values at or below it are excluded as numerical zeros; may be given
        per ε.
    window:
        Fit only the last *window* entries (the smallest ε).
    """
    v = np.asarray(values, dtype=float)
    eps = np.asarray(ladder, dtype=float)
    if eps.size < MIN_LADDER:
        raise PreconditionViolated(f"ladder needs at least {MIN_LADDER} values, got {eps.size}")
    if v.shape != eps.shape:
        raise PreconditionViolated(f"{v.size} values for a ladder of {eps.size}")
    floors = np.broadcast_to(np.asarray(floor, dtype=float), eps.shape)
    if window is not None:
        v, eps, floors = v[-window:], eps[-window:], floors[-window:]

    usable = np.isfinite(v) & (v > floors)
    if (~usable).sum() > v.size / 2:
        return GrowthFit(-math.inf, -math.inf, 0.0, int(usable.sum()))
    if usable.sum() < MIN_POINTS:
        raise InsufficientPoints(
            f"only {int(usable.sum())} of {v.size} values above the floor; need {MIN_POINTS}"
        )
    slope, intercept, residual = loglog_fit(eps[usable], v[usable])
    return GrowthFit(slope, intercept, residual, int(usable.sum()))


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

class ProfileAxis(str, Enum):
    """Which seminorm index the profile runs over."""
    SPACE_L = "space-l"
    WEIGHT_Q = "weight-q"
    TWO_INDEX = "two-index"


class ProfileEntry(BaseModel):
    """One fitted index. ``exponent = None`` is the −∞ (numerically negligible) sentinel."""

    model_config = ConfigDict(frozen=True)

    index: tuple[int, ...]
    exponent: float | None
    intercept: float | None
    residual: float = Field(ge=0.0)
    values: tuple[float, ...] = ()

    @field_validator("exponent", "intercept", mode="before")
    @classmethod
    def _sentinel(cls, v):
        if v is not None and math.isinf(v) and v < 0:
            return None
        return v

    @property
    def n_hat(self) -> float:
        return -math.inf if self.exponent is None else self.exponent


class GrowthProfile(BaseModel):
    """Fitted exponents N̂ over l, over q, or over (q, l)."""

    model_config = ConfigDict(frozen=True)

    axis: ProfileAxis
    entries: list[ProfileEntry]
    ladder_used: tuple[float, ...]

    @model_validator(mode="after")
    def _contiguous(self) -> "GrowthProfile":
        if not self.entries:
            raise ValueError("profile has no entries")
        width = 2 if self.axis is ProfileAxis.TWO_INDEX else 1
        if any(len(e.index) != width for e in self.entries):
            raise ValueError(f"{self.axis.value} profile needs {width}-component indices")
        shape = tuple(max(e.index[i] for e in self.entries) + 1 for i in range(width))
        expected = [tuple(ix) for ix in np.ndindex(*shape)]
        if [e.index for e in self.entries] != expected:
            raise ValueError("profile entries must cover a contiguous range from 0 in order")
        return self

    @property
    def shape(self) -> tuple[int, ...]:
        width = len(self.entries[0].index)
        return tuple(max(e.index[i] for e in self.entries) + 1 for i in range(width))

    def exponents(self) -> np.ndarray:
        return np.array([e.n_hat for e in self.entries]).reshape(self.shape)

    def intercepts(self) -> np.ndarray:
        return np.array(
            [-math.inf if e.intercept is None else e.intercept for e in self.entries]
        ).reshape(self.shape)

    def residuals(self) -> np.ndarray:
        return np.array([e.residual for e in self.entries]).reshape(self.shape)

    def max_residual(self, positive_only: bool = False) -> float:
        picked = [
            e.residual for e in self.entries if not positive_only or e.n_hat > 0.0
        ]
        return max(picked, default=0.0)

    def rows(self) -> list[dict]:
        """Flat rows for CSV export."""
        names = ("q", "l") if self.axis is ProfileAxis.TWO_INDEX else (
            ("l",) if self.axis is ProfileAxis.SPACE_L else ("q",)
        )
        return [
            {
                **dict(zip(names, e.index)),
                "exponent": e.n_hat,
                "intercept": -math.inf if e.intercept is None else e.intercept,
                "residual": e.residual,
            }
            for e in self.entries
        ]


def assemble_profile(
    axis: ProfileAxis,
    per_frame: list[np.ndarray],
    ladder,
    floor: float = 1e-13,
    window: int | None = None,
    strict: bool = True,
) -> GrowthProfile:
    """Fit every index of stacked per-ε seminorm arrays.

    With *strict* off, an index with too few values above the floor gets the
    −∞ sentinel instead of raising InsufficientPoints.
    """
    stack = np.stack(per_frame)
    entries = []
    for index in np.ndindex(*stack.shape[1:]):
        series = stack[(slice(None), *index)]
        try:
            fit = fit_growth(series, ladder, floor, window)
        except InsufficientPoints:
            if strict:
                raise
            fit = GrowthFit(-math.inf, -math.inf, 0.0, 0)
        if fit.negligible:
            log.debug("index %s at the floor, exponent set to the -inf sentinel", index)
        entries.append(ProfileEntry(
            index=tuple(int(i) for i in index),
            exponent=fit.exponent,
            intercept=fit.intercept,
            residual=fit.residual,
            values=tuple(float(v) for v in series),
        ))
    used = tuple(ladder)[-window:] if window else tuple(ladder)
    return GrowthProfile(axis=axis, entries=entries, ladder_used=used)


def _require_side(net: EpsilonNet, side: Side) -> None:
    if net.side is not side:
        raise PreconditionViolated(f"expected a {side.value}-side net, got {net.side.value}")


def check_decay_regime(net: EpsilonNet, tol: float = 1e-10) -> None:
    """Every frame must fall below *tol* of its peak on the box boundary."""
    for eps, frame in zip(net.ladder, net.frames):
        ratio = boundary_ratio(frame.samples)
        if ratio > tol:
            raise BoundaryDecayViolation(
                f"frame at eps={eps:.3g} is {ratio:.2e} of its peak at the boundary; "
                "the net is not rapidly decreasing on this box"
            )


def profile_space(
    net: EpsilonNet,
    K: SubBox | None = None,
    L: int = 3,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
    window: int | None = None,
    jobs: int = 1,
) -> GrowthProfile:
    """l ↦ N̂(l) for p_{K,l}(f_ε); K defaults to the central half of the box."""
    _require_side(net, Side.SPACE)
    K = K or net.box.central_half()
    per_frame = ordered_map(
        lambda f: seminorm_orders(f, K, L, scheme, floor), net.frames, jobs
    )
    return assemble_profile(ProfileAxis.SPACE_L, per_frame, net.ladder, floor, window)


def profile_decay(
    net: EpsilonNet,
    Q: int = 4,
    L: int = 2,
    scheme: Scheme = Scheme.FD4,
    floor: float = 1e-13,
    boundary_tol: float = 1e-10,
    window: int | None = None,
    jobs: int = 1,
) -> GrowthProfile:
    """(q, l) ↦ N̂(q, l) for μ_{q,l}(f_ε). Works on either side of the transform."""
    check_decay_regime(net, boundary_tol)
    per_frame = ordered_map(lambda f: seminorm_table(f, Q, L, scheme, floor), net.frames, jobs)
    return assemble_profile(ProfileAxis.TWO_INDEX, per_frame, net.ladder, floor, window)


# ---------------------------------------------------------------------------
# Negligibility
# ---------------------------------------------------------------------------

class NegligibleMode(str, Enum):
    """Which seminorms the negligibility test reads."""
    SPACE = "space"
    DECAY = "decay"


@dataclass
class SeminormDecay:
    """Decay verdict for one tested seminorm (l = 0, weight q)."""
    q: int
    slope: float
    reached_floor: bool
    passed: bool
    values: list[float] = field(default_factory=list)


@dataclass
class NegligibilityReport:
    """Per-seminorm decay slopes of a net tested for negligibility."""
    m_max: int
    rows: list[SeminormDecay] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def tail_decay(
    values: np.ndarray,
    ladder: np.ndarray,
    floors: np.ndarray,
    tail_window: int = 4,
) -> tuple[float, bool, float]:
    """Decay slope of the monotone envelope over the *tail_window* smallest ε.

    Returns (slope, reached_floor, residual); a tail with at least two frames
    at the floor has slope +∞.
    """
    floors = np.broadcast_to(np.asarray(floors, dtype=float), np.shape(values))
    # monotone envelope: sup over ε' ≤ ε
    envelope = np.maximum.accumulate(values[::-1])[::-1]
    above = envelope > floors
    window = above[-tail_window:]
    start = len(above) - len(window)
    below = np.flatnonzero(~window)
    # reached only when everything from the first sub-floor frame on stays there
    at_floor = 0
    if below.size and not window[below[0]:].any():
        at_floor = len(window) - int(below[0])
    if at_floor >= min(2, len(window)):
        return math.inf, True, 0.0
    fit = np.flatnonzero(window) + start
    if fit.size < MIN_POINTS:
        if not below.size:
            raise InsufficientPoints(f"tail window of {tail_window} is too short to fit a slope")
        # a lone drop to the floor is not a tail: fit the last frames above it
        fit = np.flatnonzero(above)[-MIN_POINTS:]
        if fit.size < MIN_POINTS:
            raise InsufficientPoints("too few frames above the floor to fit a tail slope")
    slope, _, residual = loglog_fit(ladder[fit], envelope[fit])
    return -slope, False, residual


def check_negligible(
    net: EpsilonNet,
    mode: NegligibleMode = NegligibleMode.SPACE,
    K: SubBox | None = None,
    Q: int = 0,
    m_max: int = 4,
    floor: float = 1e-13,
    tail_window: int = 4,
    reference: EpsilonNet | None = None,
    jobs: int = 1,
) -> NegligibilityReport:
    """Decay slopes of the zero-derivative seminorms of a net already known moderate.

    Rules
    -----
    1. Only l = 0 is tested: p_{K,0} in space mode, μ_{q,0} for q ≤ Q in decay mode.
    2. Slopes are fitted on the monotone envelope over the ``tail_window`` smallest ε.
    3. A seminorm passes when its decay slope is ≥ m_max or its tail reaches the floor.
    4. In decay mode the floor scales with the largest weight (1 + R)^q on the box.
    5. With a *reference* net the floor at each ε scales with the reference's
       magnitude, so roundoff in a difference of large frames counts as zero.
    """
    mode = NegligibleMode(mode)
    ladder = np.asarray(net.ladder)
    if mode is NegligibleMode.SPACE:
        K = K or net.box.central_half()
        Q = 0

        def measure(frames) -> np.ndarray:
            return np.array(ordered_map(
                lambda f: [seminorm_orders(f, K, 0, floor=0.0)[0]], frames, jobs
            ))
    else:
        def measure(frames) -> np.ndarray:
            def weighted(f) -> list[float]:
                mag = np.abs(f.samples)
                return [float(np.max(weight(f.box, q) * mag)) for q in range(Q + 1)]

            return np.array(ordered_map(weighted, frames, jobs))

    table = measure(net.frames)
    scale = np.ones_like(table)
    if reference is not None:
        scale = np.maximum(measure(reference.frames), 1.0)

    report = NegligibilityReport(m_max=m_max)
    for q in range(table.shape[1]):
        floors = floor * scale[:, q]
        if mode is NegligibleMode.DECAY:
            floors = floors * (1.0 + net.box.max_radius) ** q
        slope, reached, _ = tail_decay(table[:, q], ladder, floors, tail_window)
        report.rows.append(SeminormDecay(
            q=q,
            slope=slope,
            reached_floor=reached,
            passed=reached or slope >= m_max,
            values=[float(v) for v in table[:, q]],
        ))
    log.debug(
        "negligibility (%s): slopes %s",
        mode.value,
        ", ".join(f"{r.slope:.2f}" for r in report.rows),
    )
    return report


def is_negligible(
    net: EpsilonNet,
    mode: NegligibleMode = NegligibleMode.SPACE,
    K: SubBox | None = None,
    Q: int = 0,
    m_max: int = 4,
    floor: float = 1e-13,
    tail_window: int = 4,
    reference: EpsilonNet | None = None,
    jobs: int = 1,
) -> bool:
    """True iff every tested seminorm decays at least like ε^{m_max} or reaches the floor."""
    return check_negligible(
        net, mode, K, Q, m_max, floor, tail_window, reference, jobs
    ).passed


# ---------------------------------------------------------------------------
# Product estimate
# ---------------------------------------------------------------------------

@dataclass
class ProductEstimate:
    """Measured profile of f·g against max_{l₁+l₂=l}(N̂_f(l₁) + N̂_g(l₂))."""
    bound: list[float] = field(default_factory=list)
    measured: list[float] = field(default_factory=list)
    slack: float = 0.3

    @property
    def passed(self) -> bool:
        return all(m <= b + self.slack for m, b in zip(self.measured, self.bound))


def leibniz_bound(nf: np.ndarray, ng: np.ndarray) -> np.ndarray:
    L = min(len(nf), len(ng)) - 1
    return np.array([max(nf[j] + ng[l - j] for j in range(l + 1)) for l in range(L + 1)])


def check_product_estimate(
    f: EpsilonNet,
    g: EpsilonNet,
    K: SubBox | None = None,
    L: int = 3,
    slack: float = 0.3,
    floor: float = 1e-13,
    window: int | None = None,
) -> ProductEstimate:
    """Fit the profiles of f, g and f·g on K and compare against the Leibniz bound."""
    nf = profile_space(f, K, L, floor=floor, window=window).exponents()
    ng = profile_space(g, K, L, floor=floor, window=window).exponents()
    nfg = profile_space(f.times(g), K, L, floor=floor, window=window).exponents()
    return ProductEstimate(
        bound=[float(b) for b in leibniz_bound(nf, ng)],
        measured=[float(m) for m in nfg],
        slack=slack,
    )
