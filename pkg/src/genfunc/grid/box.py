"""Rectangular sampling boxes and the compact sub-boxes K ⋐ Ω they contain."""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from genfunc.errors import SubboxOutOfRange


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


class SubBox(BaseModel):
    """A closed axis-aligned region; sups over it are taken over the grid nodes inside."""

    model_config = ConfigDict(frozen=True)

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    @model_validator(mode="after")
    def _check(self) -> "SubBox":
        if len(self.lo) != len(self.hi) or len(self.lo) not in (1, 2):
            raise ValueError("sub-box needs matching lo/hi of dimension 1 or 2")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty sub-box {self.lo}..{self.hi}")
        return self

    @classmethod
    def interval(cls, lo: float, hi: float) -> "SubBox":
        return cls(lo=(lo,), hi=(hi,))

    @classmethod
    def around(cls, center: tuple[float, ...], half_width: float) -> "SubBox":
        return cls(
            lo=tuple(c - half_width for c in center),
            hi=tuple(c + half_width for c in center),
        )

    @property
    def dim(self) -> int:
        return len(self.lo)


class Box(BaseModel):
    """The sampling domain: ``n`` nodes per axis, x_j = lo + j·h, h = (hi − lo)/n.

    The right end ``hi`` is the first node of the next period and is not a
    sample, which keeps the nodes aligned with DFT frequencies.
    """

    model_config = ConfigDict(frozen=True)

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    n: int

    @model_validator(mode="after")
    def _check(self) -> "Box":
        if len(self.lo) != len(self.hi) or len(self.lo) not in (1, 2):
            raise ValueError("box dimension must be 1 or 2 with matching lo/hi")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"box needs lo < hi on every axis, got {self.lo}..{self.hi}")
        if self.n < 64 or not _is_power_of_two(self.n):
            raise ValueError(f"samples per axis must be a power of two ≥ 64, got {self.n}")
        return self

    # -- constructors ---------------------------------------------------------

    @classmethod
    def symmetric(cls, half_width: float, n: int, dim: int = 1) -> "Box":
        return cls(lo=(-half_width,) * dim, hi=(half_width,) * dim, n=n)

    # -- geometry -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((b - a) / self.n for a, b in zip(self.lo, self.hi))

    @property
    def h(self) -> float:
        """Largest spacing over the axes."""
        return max(self.spacing)

    @property
    def cell_volume(self) -> float:
        return math.prod(self.spacing)

    def nodes(self, axis: int = 0) -> np.ndarray:
        return self.lo[axis] + self.spacing[axis] * np.arange(self.n)

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays broadcast to the full grid (ij indexing)."""
        return tuple(np.meshgrid(*(self.nodes(i) for i in range(self.dim)), indexing="ij"))

    def radius(self) -> np.ndarray:
        """|x| at every node."""
        return np.sqrt(sum(c * c for c in self.mesh()))

    @property
    def max_radius(self) -> float:
        return math.sqrt(sum(max(abs(a), abs(b)) ** 2 for a, b in zip(self.lo, self.hi)))

    # -- frequency side -------------------------------------------------------

    def frequencies(self, axis: int = 0) -> np.ndarray:
        """Angular DFT frequencies 2π·fftfreq in FFT (unshifted) order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing[axis])

    def frequency_mesh(self) -> tuple[np.ndarray, ...]:
        """Angular frequencies on the full grid, FFT order."""
        return tuple(
            np.meshgrid(*(self.frequencies(i) for i in range(self.dim)), indexing="ij")
        )

    @property
    def nyquist(self) -> float:
        return math.pi / self.h

    def frequency_box(self) -> "Box":
        """The ascending ξ-grid: nodes −π/h + m·2π/L, m = 0..n−1."""
        return Box(
            lo=tuple(-math.pi / s for s in self.spacing),
            hi=tuple(math.pi / s for s in self.spacing),
            n=self.n,
        )

    # -- sub-boxes ------------------------------------------------------------

    def central_half(self) -> SubBox:
        """The default region for space profiles: the middle half on each axis."""
        mid = [(a + b) / 2 for a, b in zip(self.lo, self.hi)]
        quarter = [(b - a) / 4 for a, b in zip(self.lo, self.hi)]
        return SubBox(
            lo=tuple(m - w for m, w in zip(mid, quarter)),
            hi=tuple(m + w for m, w in zip(mid, quarter)),
        )

    def contains(self, sub: SubBox) -> bool:
        last = [b - s for b, s in zip(self.hi, self.spacing)]
        return sub.dim == self.dim and all(
            a >= lo - 1e-12 and b <= top + 1e-12
            for a, b, lo, top in zip(sub.lo, sub.hi, self.lo, last)
        )

    def index_slices(self, sub: SubBox) -> tuple[slice, ...]:
        """Slices selecting the grid nodes inside *sub*."""
        if not self.contains(sub):
            raise SubboxOutOfRange(f"sub-box {sub.lo}..{sub.hi} not inside {self.lo}..{self.hi}")
        slices = []
        for axis in range(self.dim):
            x = self.nodes(axis)
            pad = 1e-9 * self.spacing[axis]
            inside = np.nonzero((x >= sub.lo[axis] - pad) & (x <= sub.hi[axis] + pad))[0]
            if inside.size == 0:
                raise SubboxOutOfRange(f"sub-box {sub.lo}..{sub.hi} holds no grid node")
            slices.append(slice(int(inside[0]), int(inside[-1]) + 1))
        return tuple(slices)
