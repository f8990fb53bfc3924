"""Decide the smallest regular family a fitted exponent profile belongs to."""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict

from genfunc.errors import PreconditionViolated, Unclassifiable
from genfunc.grid.growth import GrowthProfile, ProfileAxis
from genfunc.scales.families import RegularScaleFamily, default_a_grid
from genfunc.utils.logging import log


class LinearFit(BaseModel):
    """Least-squares line N̂(n) ≈ slope·n + intercept."""

    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float


class Classification(BaseModel):
    """Outcome of :func:`classify_profile`."""

    model_config = ConfigDict(frozen=True)

    family: RegularScaleFamily
    fit: LinearFit
    margin: float

    @property
    def label(self) -> str:
        return self.family.label


def clamped(exponents) -> np.ndarray:
    """N̂ with decay (negative values and the −∞ sentinel) clamped to 0."""
    values = np.nan_to_num(np.asarray(exponents, dtype=float), nan=0.0, neginf=0.0)
    return np.maximum(values, 0.0)


def linear_fit(exponents) -> LinearFit:
    values = clamped(exponents)
    slope, intercept = np.polyfit(np.arange(len(values), dtype=float), values, 1)
    return LinearFit(slope=float(slope), intercept=float(intercept))


def family_chain(a_grid=None) -> list[RegularScaleFamily]:
    """B ⊂ R1 ⊂ Ra(a) for ascending a > 1 ⊂ Full."""
    grid = sorted(a for a in (a_grid or default_a_grid()) if a > 1.0)
    return [
        RegularScaleFamily.bounded(),
        RegularScaleFamily.r1(),
        *(RegularScaleFamily.ra(a) for a in grid),
        RegularScaleFamily.full(),
    ]


def _one_index(profile: GrowthProfile) -> np.ndarray:
    if profile.axis is ProfileAxis.TWO_INDEX:
        raise PreconditionViolated("classification takes a one-index profile")
    exponents = profile.exponents()
    if exponents.size < 4:
        raise PreconditionViolated(f"profile has {exponents.size} indices; need at least 4")
    return exponents


def check_residuals(profile: GrowthProfile, residual_limit: float) -> None:
    worst = profile.max_residual(positive_only=True)
    if worst > residual_limit:
        raise Unclassifiable(
            f"fit residual {worst:.3f} decades exceeds {residual_limit}; "
            "the net is not power-law moderate at this resolution"
        )


def classify_profile(
    profile: GrowthProfile,
    tol: float = 0.25,
    b_max: float = 3.0,
    a_grid: list[float] | None = None,
    residual_limit: float = 0.3,
) -> Classification:
    """The smallest family along B ⊂ R1 ⊂ Ra ⊂ Full accepting the profile.

    Ties go to the smaller family. The returned fit is the least-squares line
    through the clamped exponents; the fitted constant is not used in the
    decision.
    """
    exponents = _one_index(profile)
    check_residuals(profile, residual_limit)
    fit = linear_fit(exponents)
    for family in family_chain(a_grid):
        if family.accepts(exponents, tol, b_max):
            margin = family.margin(exponents, tol, b_max)
            log.debug("profile %s -> %s (margin %.3f)", np.round(exponents, 3),
                      family.label, margin)
            return Classification(family=family, fit=fit, margin=margin)
    # unreachable: Full accepts everything
    raise AssertionError("classification chain ended without Full")


def in_family(
    profile: GrowthProfile,
    family: RegularScaleFamily,
    tol: float = 0.25,
    b_max: float = 3.0,
    residual_limit: float = 0.3,
) -> bool:
    """Membership of one profile; an unclassifiable profile counts as outside."""
    exponents = _one_index(profile)
    try:
        check_residuals(profile, residual_limit)
    except Unclassifiable as exc:
        log.warning("treating profile as outside %s: %s", family.label, exc)
        return False
    return family.accepts(exponents, tol, b_max)


def membership_margin(
    profile: GrowthProfile,
    family: RegularScaleFamily,
    tol: float = 0.25,
    b_max: float = 3.0,
) -> float:
    return family.margin(_one_index(profile), tol, b_max)
