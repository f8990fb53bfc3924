"""The numerical run configuration echoed into every report."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from genfunc.grid.box import Box
from genfunc.grid.function import geometric_ladder
from genfunc.scales.families import default_a_grid


class BoxConfig(BaseModel):
    dim: int = Field(default=1, ge=1, le=2)
    lo: float = -8.0
    hi: float = 8.0
    n: int = 2**17

    @field_validator("n")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v < 64 or v & (v - 1):
            raise ValueError(f"n must be a power of two ≥ 64, got {v}")
        return v

    @model_validator(mode="after")
    def _ordered(self) -> "BoxConfig":
        if self.lo >= self.hi:
            raise ValueError(f"box needs lo < hi, got {self.lo} >= {self.hi}")
        return self

    def build(self) -> Box:
        return Box(lo=(self.lo,) * self.dim, hi=(self.hi,) * self.dim, n=self.n)


class LadderConfig(BaseModel):
    """ε_k = 2^{−k} for k = k_min, k_min + step, ..., k_max."""

    k_min: float = 5.0
    k_max: float = 11.0
    step: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _length(self) -> "LadderConfig":
        if self.k_min >= self.k_max:
            raise ValueError(f"ladder needs k_min < k_max, got {self.k_min}, {self.k_max}")
        if self.k_min < 0:
            raise ValueError("ladder values must lie in (0, 1]")
        if len(self.values()) < 6:
            raise ValueError(f"ladder has {len(self.values())} values; need at least 6")
        return self

    def values(self) -> tuple[float, ...]:
        return geometric_ladder(self.k_min, self.k_max, self.step)


class MollifierConfig(BaseModel):
    r1: float = Field(default=1.0, gt=0.0)
    r2: float = 2.0
    M: int = Field(default=6, ge=0, le=8)
    reference_half_width: float = Field(default=1024.0, gt=0.0)
    reference_n: int = 2**16

    @model_validator(mode="after")
    def _radii(self) -> "MollifierConfig":
        if self.r1 >= self.r2:
            raise ValueError(f"plateau needs r1 < r2, got {self.r1} >= {self.r2}")
        return self

    @property
    def support_wavelength(self) -> float:
        return 2.0 * math.pi / self.r2

    def reference_box(self) -> Box:
        return Box.symmetric(self.reference_half_width, self.reference_n)


class Tolerances(BaseModel):
    tol: float = 0.25
    b_max: float = 3.0
    # the classify stage allows fit noise on the G1 intercept; check_G1 itself defaults to b_max
    g1_b_max: float = Field(default=3.5, ge=0.0)
    slope_step: float = 0.25
    a_max: float = 5.0
    m_max: int = 4
    floor: float = 1e-13
    residual_limit: float = 0.3
    tail_window: int = Field(default=4, ge=2)
    boundary_tol: float = 1e-10
    envelope_factor: float = 10.0

    def a_grid(self) -> list[float]:
        return default_a_grid(self.slope_step, self.a_max)


class MicrolocalConfig(BaseModel):
    cones: int = Field(default=16, ge=4)
    r0: float = Field(default=0.5, gt=0.0)
    radii: int = Field(default=3, ge=1)
    center_spacing: float = Field(default=0.25, gt=0.0)
    center_extent: float = Field(default=2.0, gt=0.0)
    exclusion_factor: float = Field(default=2.0, ge=2.0)
    Q: int = Field(default=4, ge=3)
    full_scan: bool = False

    def radius_ladder(self) -> list[float]:
        return [self.r0 / 2**i for i in range(self.radii)]


class RunConfig(BaseModel):
    """Everything a computation depends on.

    The resolvability constraint h ≤ ε_min·r_ρ/8 (r_ρ = 2π/r2) is checked
    here so an under-resolved ladder is rejected before any work starts.
    """

    box: BoxConfig = Field(default_factory=BoxConfig)
    ladder: LadderConfig = Field(default_factory=LadderConfig)
    mollifier: MollifierConfig = Field(default_factory=MollifierConfig)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    microlocal: MicrolocalConfig = Field(default_factory=MicrolocalConfig)
    l_max: int = Field(default=3, ge=3, le=6)
    q_max: int = Field(default=4, ge=0, le=12)
    fit_window: int | None = Field(default=None, ge=4)
    family: str = "r1"
    output_dir: Path = Path("runs")

    @model_validator(mode="after")
    def _resolvable(self) -> "RunConfig":
        h = (self.box.hi - self.box.lo) / self.box.n
        eps_min = min(self.ladder.values())
        limit = eps_min * self.mollifier.support_wavelength / 8.0
        if h > limit * (1.0 + 1e-12):
            raise ValueError(
                f"resolvability violated: spacing h={h:.4g} exceeds eps_min*r_rho/8={limit:.4g}; "
                f"raise n or lower k_max"
            )
        if self.fit_window is not None and self.fit_window > len(self.ladder.values()):
            raise ValueError("fit_window exceeds the ladder length")
        return self

    # -- presets --------------------------------------------------------------

    @classmethod
    def planar(cls, **overrides) -> "RunConfig":
        """The two-dimensional preset: [−4,4]², 1024 nodes per axis, ε = 2^{−3..−5.5}."""
        base = dict(
            box=BoxConfig(dim=2, lo=-4.0, hi=4.0, n=1024),
            ladder=LadderConfig(k_min=3.0, k_max=5.5, step=0.5),
            microlocal=MicrolocalConfig(r0=1.0, center_spacing=0.5, Q=3),
            q_max=2,
            l_max=3,
        )
        base.update(overrides)
        return cls(**base)

    # -- derived --------------------------------------------------------------

    def build_box(self) -> Box:
        return self.box.build()

    def ladder_values(self) -> tuple[float, ...]:
        return self.ladder.values()

    def digest(self) -> str:
        """First 16 hex chars of sha256 over the canonical JSON form."""
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]

    def with_updates(self, **changes) -> "RunConfig":
        """A validated copy with top-level fields replaced."""
        data = self.model_dump()
        data.update(changes)
        return RunConfig.model_validate(data)
