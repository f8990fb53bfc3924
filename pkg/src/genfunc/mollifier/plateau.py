"""Analytic C^∞ profiles: the smooth step, the plateau ψ, the cutoff χ and the bump."""

from __future__ import annotations

import numpy as np

from genfunc.grid.box import Box
from genfunc.grid.function import GridFunction


def _g(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t) -> np.ndarray:
    """1 for t ≤ 0, 0 for t ≥ 1, C^∞ in between: g(1−t)/(g(1−t)+g(t)), g(t)=e^{−1/t}."""
    t = np.asarray(t, dtype=float)
    a, b = _g(1.0 - t), _g(t)
    return a / (a + b)


def plateau(r, inner: float, outer: float) -> np.ndarray:
    """≡ 1 on r ≤ inner, ≡ 0 on r ≥ outer."""
    if not 0.0 <= inner < outer:
        raise ValueError(f"plateau needs 0 ≤ inner < outer, got {inner}, {outer}")
    return smooth_step((np.abs(np.asarray(r, dtype=float)) - inner) / (outer - inner))


def psi(xi, r1: float = 1.0, r2: float = 2.0) -> np.ndarray:
    """The one-dimensional mollifier spectrum ψ(ξ)."""
    return plateau(xi, r1, r2)


def chi(x) -> np.ndarray:
    """Cutoff ≡ 1 on |x| ≤ 1, ≡ 0 on |x| ≥ 2."""
    return plateau(x, 1.0, 2.0)


def bump(t) -> np.ndarray:
    """exp(1 − 1/(1 − t²)) on |t| < 1, zero outside; equals 1 at t = 0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


def plateau_cutoff(
    box: Box,
    inner: float,
    outer: float,
    center: tuple[float, ...] | None = None,
) -> GridFunction:
    """κ ≡ 1 on the cube of half-width *inner* around *center*, 0 beyond *outer*.

    In two dimensions κ is the tensor product of one-dimensional plateaus.
    """
    center = center or (0.0,) * box.dim
    axes = box.mesh()
    values = np.ones(box.shape)
    for x, c in zip(axes, center):
        values = values * plateau(x - c, inner, outer)
    return GridFunction(box, values)
