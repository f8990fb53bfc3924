"""Discrete partial derivatives: 4th-order finite differences or spectral multipliers."""

from __future__ import annotations

import itertools
import math
from enum import Enum
from functools import lru_cache

import numpy as np

from genfunc.errors import BoundaryDecayViolation, PreconditionViolated
from genfunc.grid.function import GridFunction

MAX_ORDER = 6


class Scheme(str, Enum):
    """Differentiation scheme."""
    FD4 = "fd4"
    SPECTRAL = "spectral"


@lru_cache(maxsize=None)
def stencil_weights(offsets: tuple[int, ...], order: int) -> np.ndarray:
    """Weights w with Σ w_j f(x + s_j) ≈ f^{(order)}(x) for unit spacing.

    Solves the Taylor moment system Σ_j w_j s_j^k = k!·δ_{k,order}.
    """
    s = np.asarray(offsets, dtype=float)
    vander = np.vander(s, len(s), increasing=True).T
    rhs = np.zeros(len(s))
    rhs[order] = math.factorial(order)
    weights = np.linalg.solve(vander, rhs)
    weights.setflags(write=False)
    return weights


def _half_width(order: int) -> int:
    # smallest symmetric stencil with 4th-order accuracy
    return (order + 1) // 2 + 1


def _fd4_axis0(a: np.ndarray, order: int, h: float) -> np.ndarray:
    n = a.shape[0]
    r = _half_width(order)
    width = order + 4
    if n < max(2 * r + 1, width):
        raise PreconditionViolated(f"{n} nodes too few for a derivative of order {order}")
    out = np.zeros_like(a)
    centered = stencil_weights(tuple(range(-r, r + 1)), order)
    for j, w in enumerate(centered):
        out[r : n - r] += w * a[j : n - 2 * r + j]
    for i in itertools.chain(range(r), range(n - r, n)):
        start = min(max(i - r, 0), n - width)
        weights = stencil_weights(tuple(range(start - i, start - i + width)), order)
        out[i] = np.tensordot(weights, a[start : start + width], axes=(0, 0))
    return out / h**order


def boundary_ratio(samples: np.ndarray) -> float:
    """Largest |value| on the outer nodes relative to the largest |value| overall."""
    mag = np.abs(samples)
    top = float(mag.max()) if mag.size else 0.0
    if top == 0.0:
        return 0.0
    edge = 0.0
    for axis in range(mag.ndim):
        edge = max(
            edge,
            float(np.take(mag, 0, axis=axis).max()),
            float(np.take(mag, -1, axis=axis).max()),
        )
    return edge / top


def check_boundary_decay(g: GridFunction, tol: float = 1e-10, what: str = "frame") -> None:
    ratio = boundary_ratio(g.samples)
    if ratio > tol:
        raise BoundaryDecayViolation(
            f"{what} is {ratio:.2e} of its peak at the box boundary (limit {tol:.0e})"
        )


def derivative_array(
    samples: np.ndarray,
    spacing: tuple[float, ...],
    axis: int,
    order: int,
    scheme: Scheme = Scheme.FD4,
) -> np.ndarray:
    """∂^order along *axis* of a raw sample array."""
    if order == 0:
        return samples
    h = spacing[axis]
    if Scheme(scheme) is Scheme.FD4:
        moved = np.moveaxis(samples, axis, 0)
        return np.moveaxis(_fd4_axis0(moved, order, h), 0, axis)

    n = samples.shape[axis]
    xi = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
    multiplier = (1j * xi) ** order
    if order % 2 == 1:
        multiplier[n // 2] = 0.0
    shape = [1] * samples.ndim
    shape[axis] = n
    spectrum = np.fft.fft(samples, axis=axis) * multiplier.reshape(shape)
    return np.fft.ifft(spectrum, axis=axis)


def derivative(
    g: GridFunction,
    axis: int = 0,
    order: int = 1,
    scheme: Scheme = Scheme.FD4,
    boundary_tol: float = 1e-10,
) -> GridFunction:
    """Discrete partial derivative of one frame.

    fd4 uses centered 4th-order stencils with one-sided closures at the
    boundary; spectral multiplies by (iξ)^order and requires the frame to
    decay at the boundary.
    """
    if not 0 <= order <= MAX_ORDER:
        raise PreconditionViolated(f"derivative order {order} outside 0..{MAX_ORDER}")
    if not 0 <= axis < g.box.dim:
        raise PreconditionViolated(f"axis {axis} outside a {g.box.dim}-d box")
    if Scheme(scheme) is Scheme.SPECTRAL and order > 0:
        check_boundary_decay(g, boundary_tol, "spectral derivative input")
    return GridFunction(g.box, derivative_array(g.samples, g.box.spacing, axis, order, scheme))


def multi_indices(dim: int, order: int) -> list[tuple[int, ...]]:
    """All α with |α| = order, lexicographic."""
    if dim == 1:
        return [(order,)]
    return [(order - j, j) for j in range(order + 1)]


def partial(
    g: GridFunction,
    alpha: tuple[int, ...],
    scheme: Scheme = Scheme.FD4,
    cache: bool = True,
) -> np.ndarray:
    """|∂^α g| samples; cached on the frame per (α, scheme) unless ``cache=False``."""
    scheme = Scheme(scheme)

    def compute() -> np.ndarray:
        if scheme is Scheme.SPECTRAL and sum(alpha) > 0:
            check_boundary_decay(g, what="spectral derivative input")
        data = g.samples
        for axis, order in enumerate(alpha):
            data = derivative_array(data, g.box.spacing, axis, order, scheme)
        return np.abs(data)

    if not cache:
        return compute()
    return g.cached(("abs-partial", alpha, scheme.value), compute)
