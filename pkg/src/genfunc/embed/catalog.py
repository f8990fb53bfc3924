"""Sampling and convolution rules for the distribution catalog.

Singular entries never touch a grid convolution: δ^{(k)}∗K = K^{(k)} and
H∗K is the running integral of K.  Function entries are convolved with the
kernel by a linear (zero-padded) FFT convolution.
"""

from __future__ import annotations

from typing import Callable, Protocol

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.signal import fftconvolve

from genfunc.errors import ConvolutionRuleMissing, PreconditionViolated
from genfunc.grid.box import Box
from genfunc.grid.function import GridFunction
from genfunc.mollifier.plateau import bump
from genfunc.models.distribution import DistributionSpec, SpecTag


class Kernel(Protocol):
    """∂^k K_ε(x − center) on a one-dimensional box."""

    def __call__(self, box: Box, order: int, center: float) -> np.ndarray: ...


_PROFILES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "gaussian": lambda x: np.exp(-x**2),
    "gaussian_half": lambda x: np.exp(-x**2 / 2.0),
    "bump": bump,
    "square": lambda x: x**2,
    "zero": np.zeros_like,
    "ramp": lambda x: np.maximum(x, 0.0),
    "abs": np.abs,
    "tent": lambda x: np.maximum(1.0 - np.abs(x), 0.0),
}


def profile(spec: DistributionSpec) -> Callable[[np.ndarray], np.ndarray]:
    """The sampled function behind a function-type one-dimensional entry."""
    match spec.tag:
        case SpecTag.SMOOTH | SpecTag.CONT_DERIV:
            return _PROFILES[spec.f]
        case SpecTag.WEIGHTED_POLY:
            return lambda x: x**spec.degree * np.exp(-spec.decay * x**2)
    raise PreconditionViolated(f"{spec.name} is not given by a sampled function")


def axis_box(box: Box, axis: int) -> Box:
    return Box(lo=(box.lo[axis],), hi=(box.hi[axis],), n=box.n)


def is_smooth(spec: DistributionSpec) -> bool:
    match spec.tag:
        case SpecTag.SMOOTH | SpecTag.WEIGHTED_POLY:
            return True
        case SpecTag.TENSOR:
            return all(is_smooth(s) for s in spec.factors)
        case SpecTag.COMBINATION:
            return all(is_smooth(t.spec) for t in spec.terms)
    return False


def _check_dim(spec: DistributionSpec, box: Box) -> None:
    if spec.dim != box.dim:
        raise ConvolutionRuleMissing(f"{spec.name} is {spec.dim}-d but the box is {box.dim}-d")


def _sample_1d(spec: DistributionSpec, box: Box) -> np.ndarray:
    if spec.tag is SpecTag.COMBINATION:
        return sum(t.coef * _sample_1d(t.spec, box) for t in spec.terms)
    return profile(spec)(box.nodes())


def sample(spec: DistributionSpec, box: Box) -> GridFunction:
    """f on the box nodes, for smooth entries (the σ embedding)."""
    _check_dim(spec, box)
    if not is_smooth(spec):
        raise PreconditionViolated(f"{spec.name} is not a smooth function")
    if spec.tag is SpecTag.COMBINATION:
        total = sum(t.coef * sample(t.spec, box).samples for t in spec.terms)
        return GridFunction(box, total)
    if spec.tag is SpecTag.TENSOR:
        parts = [_sample_1d(s, axis_box(box, i)) for i, s in enumerate(spec.factors)]
        return GridFunction(box, np.multiply.outer(parts[0], parts[1]))
    return GridFunction(box, _sample_1d(spec, box))


def linear_convolution(f: np.ndarray, k: np.ndarray, box: Box) -> np.ndarray:
    """(f∗k)(x_i) = h·Σ_j f(x_j)k(x_i − x_j) on a one-dimensional box.

    The kernel is sampled on the same nodes, so k(x_i − x_j) sits at index
    i − j + c with c = −lo/h.
    """
    h = box.spacing[0]
    c = int(round(-box.lo[0] / h))
    if not 0 <= c < box.n:
        raise PreconditionViolated("kernel grid must contain the origin")
    full = fftconvolve(f, k, mode="full")
    return h * full[c : c + box.n]


def _convolve_1d(spec: DistributionSpec, kernel: Kernel, box: Box) -> np.ndarray:
    match spec.tag:
        case SpecTag.DELTA_DERIV:
            return kernel(box, spec.k, spec.at)
        case SpecTag.HEAVISIDE:
            k = kernel(box, 0, spec.at)
            return cumulative_trapezoid(k, dx=box.spacing[0], initial=0.0)
        case SpecTag.SMOOTH | SpecTag.WEIGHTED_POLY:
            return linear_convolution(profile(spec)(box.nodes()), kernel(box, 0, 0.0), box)
        case SpecTag.CONT_DERIV:
            f = profile(spec)(box.nodes())
            return linear_convolution(f, kernel(box, spec.alpha, 0.0), box)
        case SpecTag.COMBINATION:
            return sum(t.coef * _convolve_1d(t.spec, kernel, box) for t in spec.terms)
    raise ConvolutionRuleMissing(f"no one-dimensional convolution rule for {spec.name}")


def convolve(spec: DistributionSpec, kernel: Kernel, box: Box) -> GridFunction:
    """T∗K_ε on the box; two-dimensional entries must be tensor products (or sums of them)."""
    _check_dim(spec, box)
    if box.dim == 1:
        return GridFunction(box, _convolve_1d(spec, kernel, box))
    if spec.tag is SpecTag.COMBINATION:
        total = sum(t.coef * convolve(t.spec, kernel, box).samples for t in spec.terms)
        return GridFunction(box, total)
    if spec.tag is not SpecTag.TENSOR:
        raise ConvolutionRuleMissing(f"{spec.name} has no two-dimensional convolution rule")
    parts = [_convolve_1d(s, kernel, axis_box(box, i)) for i, s in enumerate(spec.factors)]
    return GridFunction(box, np.multiply.outer(parts[0], parts[1]))
