"""Frequency cones and the cutoff bumps used to localize a net in space."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from genfunc.errors import PreconditionViolated
from genfunc.grid.box import Box
from genfunc.grid.function import GridFunction
from genfunc.mollifier.plateau import bump


def frequency_spacing(space: Box) -> float:
    """Δξ = 2π/(n·h), the largest over the axes."""
    return max(2.0 * math.pi / (b - a) for a, b in zip(space.lo, space.hi))


class Cone(BaseModel):
    """An open conic neighbourhood of frequency directions, minus a ball around ξ = 0.

    Rules
    -----
    In one dimension a cone is a half-line given by ``sign``. In two
    dimensions it is the angular sector [theta1, theta2) (radians, theta1 may
    be negative). Nodes with |ξ| ≤ ``exclusion_radius`` never count.
    """

    model_config = ConfigDict(frozen=True)

    dim: int = Field(ge=1, le=2)
    sign: int | None = None
    theta1: float | None = None
    theta2: float | None = None
    exclusion_radius: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _shape(self) -> "Cone":
        if self.dim == 1 and self.sign not in (1, -1):
            raise ValueError("a one-dimensional cone needs sign +1 or -1")
        if self.dim == 2:
            if self.theta1 is None or self.theta2 is None:
                raise ValueError("a two-dimensional cone needs theta1 and theta2")
            if not 0.0 < self.theta2 - self.theta1 < math.pi:
                raise ValueError("sector width must lie in (0, π)")
        return self

    @property
    def label(self) -> str:
        if self.dim == 1:
            return "+" if self.sign > 0 else "-"
        return f"[{math.degrees(self.theta1):.2f},{math.degrees(self.theta2):.2f})"

    def bounds(self) -> tuple[float, float]:
        """(θ₁, θ₂) for the CSV; a 1-d cone is the half-line at angle 0 or π."""
        if self.dim == 1:
            return (0.0, 0.0) if self.sign > 0 else (math.pi, math.pi)
        return (self.theta1, self.theta2)

    def contains_direction(self, direction: tuple[float, ...]) -> bool:
        if self.dim == 1:
            return self.sign * direction[0] > 0
        angle = math.atan2(direction[1], direction[0])
        return (angle - self.theta1) % (2.0 * math.pi) < self.theta2 - self.theta1

    def mask(self, freq: Box) -> np.ndarray:
        """Frequency nodes inside the cone and beyond the exclusion radius."""
        if freq.dim != self.dim:
            raise PreconditionViolated(f"{self.dim}-d cone on a {freq.dim}-d frequency grid")
        beyond = freq.radius() > self.exclusion_radius
        if self.dim == 1:
            return beyond & (self.sign * freq.nodes(0) > 0)
        xi1, xi2 = freq.mesh()
        angle = np.mod(np.arctan2(xi2, xi1) - self.theta1, 2.0 * math.pi)
        return beyond & (angle < self.theta2 - self.theta1)

    def with_exclusion(self, radius: float) -> "Cone":
        return self.model_copy(update={"exclusion_radius": radius})


def sectors(dim: int, count: int, exclusion_radius: float) -> list[Cone]:
    """The cone lattice: ± in one dimension, *count* equal sectors in two.

    Sector k is centered on the angle k·2π/count, so every axis direction
    lies inside a sector rather than on a boundary.
    """
    if dim == 1:
        return [Cone(dim=1, sign=s, exclusion_radius=exclusion_radius) for s in (1, -1)]
    if count < 4:
        raise PreconditionViolated(f"need at least 4 sectors, got {count}")
    width = 2.0 * math.pi / count
    return [
        Cone(
            dim=2,
            theta1=k * width - width / 2,
            theta2=k * width + width / 2,
            exclusion_radius=exclusion_radius,
        )
        for k in range(count)
    ]


def default_cones(space: Box, count: int = 16, exclusion_factor: float = 2.0) -> list[Cone]:
    if exclusion_factor < 2.0:
        raise PreconditionViolated("exclusion radius must be at least two frequency cells")
    return sectors(space.dim, count, exclusion_factor * frequency_spacing(space))


@lru_cache(maxsize=8)
def sector_labels(freq: Box, cones: tuple[Cone, ...]) -> np.ndarray:
    """Integer label per node: i+1 for nodes in cones[i], 0 outside all cones.

    Cones are assumed disjoint; where they overlap the later one wins.
    """
    labels = np.zeros(freq.shape, dtype=np.int32)
    for i, cone in enumerate(cones):
        labels[cone.mask(freq)] = i + 1
    labels.setflags(write=False)
    return labels


class CutoffFamily(BaseModel):
    """Centers on a regular grid and a geometric ladder of bump radii."""

    model_config = ConfigDict(frozen=True)

    centers: tuple[tuple[float, ...], ...]
    radii: tuple[float, ...]
    spacing: float = Field(gt=0.0)

    @model_validator(mode="after")
    def _check(self) -> "CutoffFamily":
        if not self.centers or not self.radii:
            raise ValueError("cutoff family needs centers and radii")
        if any(b >= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly decreasing")
        return self

    @classmethod
    def regular(
        cls,
        dim: int,
        spacing: float,
        extent: float,
        r0: float,
        count: int = 3,
    ) -> "CutoffFamily":
        """Centers k·spacing in [−extent, extent]^d, radii r₀, r₀/2, ..."""
        steps = int(math.floor(extent / spacing + 1e-9))
        axis = [round(k * spacing, 12) for k in range(-steps, steps + 1)]
        if dim == 1:
            centers = tuple((x,) for x in axis)
        else:
            centers = tuple((x, y) for x in axis for y in axis)
        return cls(
            centers=centers,
            radii=tuple(r0 / 2**i for i in range(count)),
            spacing=spacing,
        )

    @property
    def dim(self) -> int:
        return len(self.centers[0])

    @property
    def smallest(self) -> float:
        return self.radii[-1]

    def cutoff(self, box: Box, center: tuple[float, ...], radius: float) -> GridFunction:
        """φ(x) = bump(|x − c|/r): 1 at the center, ≡ 0 for |x − c| ≥ r."""
        if len(center) != box.dim:
            raise PreconditionViolated("center dimension does not match the box")
        dist2 = sum((x - c) ** 2 for x, c in zip(box.mesh(), center))
        return GridFunction(box, bump(np.sqrt(dist2) / radius))

    def neighbours(self, center: tuple[float, ...]) -> list[tuple[float, ...]]:
        """Grid centers within one cell of *center* (Chebyshev distance), itself included."""
        reach = self.spacing * (1.0 + 1e-9)
        return [
            c for c in self.centers
            if max(abs(a - b) for a, b in zip(c, center)) <= reach
        ]
