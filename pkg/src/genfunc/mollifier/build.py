"""The mollifier ρ = F⁻¹ψ, its scalings ρ_ε and the log-cutoff family θ_ε."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel
from scipy.integrate import trapezoid

from genfunc.errors import (
    AliasingError,
    MomentValidationFailed,
    PreconditionViolated,
    UnderResolved,
)
from genfunc.grid.box import Box
from genfunc.grid.derivatives import multi_indices
from genfunc.grid.function import GridFunction
from genfunc.grid.growth import tail_decay
from genfunc.mollifier.plateau import chi, psi
from genfunc.utils.logging import log
from genfunc.utils.parallel import ordered_map

MAX_MOMENT = 8
MASS_TOL = 1e-10
EVEN_MOMENT_RTOL = 1e-4
ODD_MOMENT_TOL = 1e-11
TAIL_TOL = 1e-10
DECAY_SLOPE = 4.0


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------

class MomentValidation(BaseModel):
    """Quadrature checks run on ρ before a mollifier is handed out."""

    mass_error: float
    odd_moments: list[float]
    even_relative: list[float]
    tail_max: float

    @property
    def passed(self) -> bool:
        return (
            self.mass_error <= MASS_TOL
            and all(abs(v) <= ODD_MOMENT_TOL for v in self.odd_moments)
            and all(v <= EVEN_MOMENT_RTOL for v in self.even_relative)
            and self.tail_max <= TAIL_TOL
        )


@dataclass(frozen=True, eq=False)
class Mollifier:
    """ρ on its one-dimensional reference box with the plateau spectrum it came from.

    Rules
    -----
    1. ψ ≡ 1 on |ξ| ≤ r1 and ≡ 0 on |ξ| ≥ r2.
    2. ∫ρ = 1 and the moments of order 1..M vanish to quadrature precision.
    3. In d = 2 the mollifier is ρ(x₁)ρ(x₂), so every two-dimensional
       quantity is a tensor product of one-dimensional ones.
    """

    reference: Box
    rho: GridFunction
    psi: GridFunction
    r1: float
    r2: float
    M: int
    validation: MomentValidation

    @property
    def validated_moment_order(self) -> int:
        return self.M

    @property
    def support_wavelength(self) -> float:
        """r_ρ = 2π/r2, the shortest wavelength present in ρ."""
        return 2.0 * math.pi / self.r2

    def spectrum(self, xi) -> np.ndarray:
        return psi(xi, self.r1, self.r2)

    def rho_at_zero(self) -> float:
        """ρ(0) = (1/2π)∫ψ, evaluated by quadrature of the analytic spectrum."""
        xi = np.linspace(-self.r2, self.r2, 20001)
        return float(trapezoid(self.spectrum(xi), xi) / (2.0 * math.pi))

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(json.dumps(
            {"r1": self.r1, "r2": self.r2, "M": self.M, "box": self.reference.model_dump()},
            sort_keys=True,
        ).encode())
        h.update(np.ascontiguousarray(self.rho.samples.real, dtype="<f8").tobytes())
        return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _inverse_axis(box: Box, axis: int, spectrum: np.ndarray) -> np.ndarray:
    """Continuum inverse transform of a spectrum given in FFT order along one axis."""
    xi = box.frequencies(axis)
    phase = np.exp(1j * xi * box.lo[axis])
    return np.fft.ifft(spectrum * phase) / box.spacing[axis]


def _symmetrized(values: np.ndarray) -> np.ndarray:
    # node j and node n − j are mirror images on a symmetric box
    mirror = np.roll(values[::-1], 1)
    return 0.5 * (values + mirror)


def _paired_moment(x: np.ndarray, rho: np.ndarray, m: int, h: float) -> float:
    # node j against its mirror n − j; node 0 is its own periodic image
    n = len(x)
    j = np.arange(1, n // 2 + 1)
    mirror = (n - j) % n
    pairs = x[j] ** m * rho[j] + np.where(j == n - j, 0.0, x[mirror] ** m * rho[mirror])
    return float(np.sum(pairs) * h)


def validate(box: Box, rho: np.ndarray, M: int) -> MomentValidation:
    x = box.nodes()
    h = box.spacing[0]
    mass = float(np.sum(rho) * h)
    odd, even = [], []
    for m in range(1, M + 1):
        if m % 2:
            odd.append(_paired_moment(x, rho, m, h))
        else:
            moment = float(np.sum(x**m * rho) * h)
            scale = float(np.sum(np.abs(x) ** m * np.abs(rho)) * h)
            even.append(abs(moment) / scale)
    outer = np.abs(x) >= 0.75 * max(abs(box.lo[0]), abs(box.hi[0]))
    return MomentValidation(
        mass_error=abs(mass - 1.0),
        odd_moments=odd,
        even_relative=even,
        tail_max=float(np.max(np.abs(rho[outer]))),
    )


def build_rho(box: Box, r1: float = 1.0, r2: float = 2.0, M: int = 6) -> Mollifier:
    """Construct ρ as the inverse DFT of the plateau ψ and validate its moments.

    *box* is the one-dimensional reference box; it has to be wide enough for
    ρ's stretched-exponential tail to fall below 1e-10 in its outer eighth.
    """
    if box.dim != 1:
        raise PreconditionViolated("the reference box is one-dimensional")
    if not 0.0 < r1 < r2:
        raise PreconditionViolated(f"need 0 < r1 < r2, got r1={r1}, r2={r2}")
    if not 0 <= M <= MAX_MOMENT:
        raise PreconditionViolated(f"moment order {M} outside 0..{MAX_MOMENT}")
    if r2 >= box.nyquist:
        raise AliasingError(f"support radius {r2} reaches the Nyquist frequency {box.nyquist:.3g}")

    spectrum = psi(box.frequencies(), r1, r2)
    rho = _symmetrized(_inverse_axis(box, 0, spectrum).real)
    validation = validate(box, rho, M)
    if not validation.passed:
        raise MomentValidationFailed(
            f"mass error {validation.mass_error:.2e}, tail {validation.tail_max:.2e}, "
            f"even moments {['%.1e' % v for v in validation.even_relative]}; "
            "widen the reference box or move r2 away from Nyquist"
        )

    freq = box.frequency_box()
    mollifier = Mollifier(
        reference=box,
        rho=GridFunction(box, rho),
        psi=GridFunction(freq, psi(freq.nodes(), r1, r2)),
        r1=r1,
        r2=r2,
        M=M,
        validation=validation,
    )
    log.info(
        "Mollifier built on %d nodes (r1=%g, r2=%g, M=%d), digest %s",
        box.n, r1, r2, M, mollifier.digest(),
    )
    return mollifier


# ---------------------------------------------------------------------------
# Scaled families
# ---------------------------------------------------------------------------

def max_spacing(m: Mollifier, eps: float) -> float:
    """Largest grid spacing resolving ρ_ε: ε·r_ρ/8."""
    return eps * m.support_wavelength / 8.0


def check_resolved(m: Mollifier, eps: float, box: Box) -> None:
    if not 0.0 < eps <= 1.0:
        raise PreconditionViolated(f"eps={eps} outside (0, 1]")
    if box.h > max_spacing(m, eps) * (1.0 + 1e-12):
        raise UnderResolved(
            f"spacing {box.h:.3g} cannot resolve eps={eps:.3g}; "
            f"need h <= eps*r_rho/8 = {max_spacing(m, eps):.3g}"
        )


def _rho_eps_axis(
    m: Mollifier,
    eps: float,
    box: Box,
    axis: int,
    order: int,
    center: float,
) -> np.ndarray:
    xi = box.frequencies(axis)
    spectrum = m.spectrum(eps * xi) * np.exp(-1j * xi * center) * (1j * xi) ** order
    return _inverse_axis(box, axis, spectrum).real


def rho_eps(
    m: Mollifier,
    eps: float,
    box: Box,
    center: tuple[float, ...] | None = None,
    orders: tuple[int, ...] | None = None,
) -> GridFunction:
    """ρ_ε(x − c) = ε^{−d}ρ((x − c)/ε), or its partial derivative ∂^orders.

    Sampled through the exact spectrum ψ(εξ)·(iξ)^k, one axis at a time.
    """
    check_resolved(m, eps, box)
    center = center or (0.0,) * box.dim
    orders = orders or (0,) * box.dim
    factors = [
        _rho_eps_axis(m, eps, box, axis, orders[axis], center[axis]) for axis in range(box.dim)
    ]
    values = factors[0] if box.dim == 1 else np.multiply.outer(factors[0], factors[1])
    return GridFunction(box, values)


def log_cutoff(eps: float, box: Box, center: tuple[float, ...] | None = None) -> np.ndarray:
    """χ(|ln ε|·(x − c)), tensor product over the axes."""
    center = center or (0.0,) * box.dim
    scale = abs(math.log(eps))
    values = np.ones(box.shape)
    for x, c in zip(box.mesh(), center):
        values = values * chi(scale * (x - c))
    return values


def theta(
    m: Mollifier,
    eps: float,
    box: Box,
    center: tuple[float, ...] | None = None,
) -> GridFunction:
    """θ_ε(x − c) = ε^{−d}ρ((x − c)/ε)·χ(|ln ε|(x − c)).

    In d = 2 both factors are tensor products over the axes, ρ like χ, so the cutoff
    is χ(|ln ε|x₁)·χ(|ln ε|x₂) rather than a radial one.
    """
    if not 0.0 < eps < 1.0:
        raise PreconditionViolated(f"theta needs eps in (0, 1), got {eps}")
    base = rho_eps(m, eps, box, center)
    return GridFunction(box, base.samples * log_cutoff(eps, box, center))


def theta_derivative(
    m: Mollifier,
    eps: float,
    box: Box,
    orders: tuple[int, ...],
    center: tuple[float, ...] | None = None,
) -> GridFunction:
    """∂^orders θ_ε by spectral differentiation of the sampled θ_ε."""
    data = theta(m, eps, box, center).samples
    for axis, order in enumerate(orders):
        if order == 0:
            continue
        xi = box.frequencies(axis)
        shape = [1] * box.dim
        shape[axis] = box.n
        spectrum = np.fft.fft(data, axis=axis) * ((1j * xi) ** order).reshape(shape)
        data = np.fft.ifft(spectrum, axis=axis)
    return GridFunction(box, data.real)


# ---------------------------------------------------------------------------
# Moment decay
# ---------------------------------------------------------------------------

@dataclass
class MomentRow:
    """Decay of one moment ∫x^β θ_ε (order 0: ∫θ_ε − 1) over the ladder."""
    beta: tuple[int, ...]
    values: list[float]
    slope: float
    residual: float
    reached_floor: bool
    passed: bool


@dataclass
class MomentReport:
    """Fitted decay slopes of the θ_ε moments; each must decay like ε^4 or reach the floor."""
    ladder: list[float]
    rows: list[MomentRow] = field(default_factory=list)
    threshold: float = DECAY_SLOPE

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def theta_moments(m: Mollifier, eps: float, box: Box, M: int) -> dict[tuple[int, ...], float]:
    frame = theta(m, eps, box).samples.real
    mesh = box.mesh()
    out: dict[tuple[int, ...], float] = {}
    for order in range(M + 1):
        for beta in multi_indices(box.dim, order):
            weight = np.ones(box.shape)
            for x, power in zip(mesh, beta):
                weight = weight * x**power
            moment = float(np.sum(weight * frame) * box.cell_volume)
            out[beta] = abs(moment - 1.0) if order == 0 else abs(moment)
    return out


def check_moments(
    m: Mollifier,
    ladder,
    box: Box,
    M: int | None = None,
    floor: float = 1e-12,
    tail_window: int = 4,
    jobs: int = 1,
) -> MomentReport:
    """Quadrature of x^β θ_ε per ε with decay slopes fitted on the ladder's tail."""
    M = m.M if M is None else M
    ladder = list(ladder)
    per_eps = ordered_map(lambda e: theta_moments(m, e, box, M), ladder, jobs)
    report = MomentReport(ladder=ladder)
    for beta in per_eps[0]:
        values = np.array([row[beta] for row in per_eps])
        slope, reached, residual = tail_decay(values, np.asarray(ladder), floor, tail_window)
        report.rows.append(MomentRow(
            beta=beta,
            values=[float(v) for v in values],
            slope=slope,
            residual=residual,
            reached_floor=reached,
            passed=reached or slope >= DECAY_SLOPE,
        ))
    log.info(
        "Moment check over %d eps values: %s",
        len(ladder), "pass" if report.passed else "FAIL",
    )
    return report
