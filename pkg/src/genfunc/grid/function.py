"""Grid-sampled functions and ε-nets of them."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from genfunc.errors import PreconditionViolated
from genfunc.grid.box import Box


class Side(str, Enum):
    """Which variable the frames are sampled in."""
    SPACE = "space"
    FREQUENCY = "frequency"


def geometric_ladder(k_min: float, k_max: float, step: float = 1.0) -> tuple[float, ...]:
    """ε_k = 2^{−k} for k = k_min, k_min + step, ..., k_max (strictly decreasing)."""
    count = int(round((k_max - k_min) / step)) + 1
    return tuple(float(2.0 ** -(k_min + i * step)) for i in range(count))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """One complex-valued frame on a box."""

    box: Box
    samples: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        data = np.ascontiguousarray(self.samples, dtype=np.complex128)
        if data.shape != self.box.shape:
            raise ValueError(f"samples of shape {data.shape} do not match box {self.box.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("grid function holds non-finite samples")
        data.setflags(write=False)
        object.__setattr__(self, "samples", data)

    @classmethod
    def from_callable(cls, box: Box, fn: Callable[..., np.ndarray]) -> "GridFunction":
        """Sample ``fn(x)`` (d=1) or ``fn(x1, x2)`` (d=2) on the box nodes."""
        values = fn(*box.mesh())
        return cls(box, np.broadcast_to(values, box.shape))

    @classmethod
    def zeros(cls, box: Box) -> "GridFunction":
        return cls(box, np.zeros(box.shape, dtype=np.complex128))

    def cached(self, key, compute: Callable[[], np.ndarray]) -> np.ndarray:
        value = self._cache.get(key)
        if value is None:
            # worker threads may race here; compute() is pure, and the first stored result wins
            value = self._cache.setdefault(key, compute())
        return value

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples))) if self.samples.size else 0.0

    def integral(self) -> complex:
        return complex(np.sum(self.samples) * self.box.cell_volume)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.box, self.samples + other.samples)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.box, self.samples - other.samples)

    def __mul__(self, other) -> "GridFunction":
        if isinstance(other, GridFunction):
            return GridFunction(self.box, self.samples * other.samples)
        return GridFunction(self.box, self.samples * other)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class EpsilonNet:
    """A ladder of ε values with one frame per ε, the stand-in for (f_ε)_ε.

    Frequency-side nets remember the space box they were transformed from in
    ``conjugate`` so the inverse transform restores the original offsets.
    """

    box: Box
    ladder: tuple[float, ...]
    frames: tuple[GridFunction, ...]
    side: Side = Side.SPACE
    conjugate: Box | None = None

    def __post_init__(self) -> None:
        ladder = tuple(float(e) for e in self.ladder)
        object.__setattr__(self, "ladder", ladder)
        object.__setattr__(self, "frames", tuple(self.frames))
        if len(ladder) < 6:
            raise PreconditionViolated(f"ladder needs at least 6 values, got {len(ladder)}")
        if any(e <= 0 or e > 1 for e in ladder):
            raise PreconditionViolated("ladder values must lie in (0, 1]")
        if any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise PreconditionViolated("ladder must be strictly decreasing")
        if len(self.frames) != len(ladder):
            raise PreconditionViolated(
                f"{len(self.frames)} frames for a ladder of {len(ladder)} values"
            )
        if any(f.box != self.box for f in self.frames):
            raise PreconditionViolated("all frames must share the net's box")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_frames(
        cls,
        box: Box,
        ladder,
        frames,
        side: Side = Side.SPACE,
        conjugate: Box | None = None,
    ) -> "EpsilonNet":
        gfs = [f if isinstance(f, GridFunction) else GridFunction(box, f) for f in frames]
        return cls(box, tuple(ladder), tuple(gfs), side, conjugate)

    @classmethod
    def constant(cls, frame: GridFunction, ladder) -> "EpsilonNet":
        ladder = tuple(ladder)
        return cls(frame.box, ladder, (frame,) * len(ladder))

    @classmethod
    def zeros(cls, box: Box, ladder, side: Side = Side.SPACE) -> "EpsilonNet":
        ladder = tuple(ladder)
        return cls(box, ladder, (GridFunction.zeros(box),) * len(ladder), side)

    def with_frames(self, frames) -> "EpsilonNet":
        return EpsilonNet.from_frames(self.box, self.ladder, frames, self.side, self.conjugate)

    # -- algebra --------------------------------------------------------------

    def map(self, fn: Callable[[GridFunction, float], GridFunction]) -> "EpsilonNet":
        return self.with_frames([fn(f, e) for f, e in zip(self.frames, self.ladder)])

    def _check_compatible(self, other: "EpsilonNet") -> None:
        if other.box != self.box or other.ladder != self.ladder or other.side != self.side:
            raise PreconditionViolated("nets differ in box, ladder or side")

    def __add__(self, other: "EpsilonNet") -> "EpsilonNet":
        self._check_compatible(other)
        return self.with_frames([a + b for a, b in zip(self.frames, other.frames)])

    def __sub__(self, other: "EpsilonNet") -> "EpsilonNet":
        self._check_compatible(other)
        return self.with_frames([a - b for a, b in zip(self.frames, other.frames)])

    def scaled(self, factor: complex) -> "EpsilonNet":
        return self.with_frames([f * factor for f in self.frames])

    def power_scaled(self, c: float) -> "EpsilonNet":
        """Frames multiplied by ε^{−c}."""
        return self.map(lambda f, e: f * (e ** -c))

    def times(self, other: "EpsilonNet | GridFunction") -> "EpsilonNet":
        """Pointwise product with another net or with a fixed grid function."""
        if isinstance(other, GridFunction):
            return self.with_frames([f * other for f in self.frames])
        self._check_compatible(other)
        return self.with_frames([a * b for a, b in zip(self.frames, other.frames)])

    def sup_norms(self) -> np.ndarray:
        return np.array([f.sup() for f in self.frames])
