"""Regular scale families and their finite-range membership predicates."""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from genfunc.scales.sequences import ScaleSequence, SequenceKind, log_basis


# ---------------------------------------------------------------------------
# Enumerations
# ---------------------------------------------------------------------------

class FamilyName(str, Enum):
    """Built-in families of growth sequences."""
    BOUNDED = "B"
    AFFINE = "A"
    R1 = "R1"
    RA = "Ra"
    LOG1 = "Log1"
    LOG = "L_og"
    FULL = "Full"


class Basis(str, Enum):
    """Shape of the witness sequences a family is searched over."""
    CONSTANT = "constant"
    LINEAR = "linear"
    LOG = "log"
    POINTWISE = "pointwise"


class Lift(str, Enum):
    """How a one-index family is lifted to two indices (q, l)."""
    U = "u-lift"
    D = "d-lift"
    FULL = "full"
    BOUNDED = "bounded"


CLI_NAMES: dict[str, FamilyName] = {
    "bounded": FamilyName.BOUNDED,
    "affine": FamilyName.AFFINE,
    "r1": FamilyName.R1,
    "ra": FamilyName.RA,
    "log1": FamilyName.LOG1,
    "log": FamilyName.LOG,
    "full": FamilyName.FULL,
}

_BASIS: dict[FamilyName, Basis] = {
    FamilyName.BOUNDED: Basis.CONSTANT,
    FamilyName.AFFINE: Basis.LINEAR,
    FamilyName.R1: Basis.LINEAR,
    FamilyName.RA: Basis.LINEAR,
    FamilyName.LOG1: Basis.LOG,
    FamilyName.LOG: Basis.LOG,
    FamilyName.FULL: Basis.POINTWISE,
}


def slope_grid(step: float = 0.25, a_max: float = 5.0) -> list[float]:
    """0, step, 2·step, ..., a_max."""
    count = int(round(a_max / step))
    return [round(i * step, 10) for i in range(count + 1)]


def default_a_grid(step: float = 0.25, a_max: float = 5.0) -> list[float]:
    """Ra parameters above 1, so that R1 ⊆ Ra(a) along the classification chain."""
    return [a for a in slope_grid(step, a_max) if a > 1.0]


def basis_values(basis: Basis, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    match basis:
        case Basis.CONSTANT:
            return np.zeros_like(n)
        case Basis.LINEAR:
            return n
        case Basis.LOG:
            return log_basis(n)
        case Basis.POINTWISE:
            return np.zeros_like(n)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

class RegularScaleFamily(BaseModel):
    """A named family of growth sequences.

    Parameters
    ----------
    name:
        Which built-in family.
    a:
        The Ra bound (sequences of asymptotic slope strictly below *a*);
        ``math.inf`` makes Ra coincide with ``Full`` on finite ranges.
    generators:
        Members used as inputs of the axiom witness searches.  Empty means
        the family's defaults.
    """

    model_config = ConfigDict(frozen=True)

    name: FamilyName
    a: float | None = None
    generators: tuple[ScaleSequence, ...] = Field(default=())

    # -- constructors ---------------------------------------------------------

    @classmethod
    def bounded(cls) -> "RegularScaleFamily":
        return cls(name=FamilyName.BOUNDED)

    @classmethod
    def r1(cls) -> "RegularScaleFamily":
        return cls(name=FamilyName.R1)

    @classmethod
    def ra(cls, a: float) -> "RegularScaleFamily":
        return cls(name=FamilyName.RA, a=a)

    @classmethod
    def full(cls) -> "RegularScaleFamily":
        return cls(name=FamilyName.FULL)

    @classmethod
    def from_cli(cls, name: str, a: float = 2.0) -> "RegularScaleFamily":
        family = CLI_NAMES.get(name.lower())
        if family is None:
            raise ValueError(f"unknown family {name!r}; choose from {sorted(CLI_NAMES)}")
        return cls(name=family, a=a if family is FamilyName.RA else None)

    # -- descriptors ----------------------------------------------------------

    @property
    def label(self) -> str:
        if self.name is FamilyName.RA:
            return f"Ra({self.a:g})"
        return self.name.value

    @property
    def basis(self) -> Basis:
        return _BASIS[self.name]

    @property
    def rank(self) -> float:
        """Position in the chain B ⊂ R1 ⊂ Ra(a) ⊂ Full (families off the chain: NaN)."""
        match self.name:
            case FamilyName.BOUNDED:
                return 0.0
            case FamilyName.R1:
                return 1.0
            case FamilyName.RA:
                return float(self.a)
            case FamilyName.FULL:
                return math.inf
            case _:
                return math.nan

    def generator_set(self) -> tuple[ScaleSequence, ...]:
        if self.generators:
            return self.generators
        match self.name:
            case FamilyName.BOUNDED:
                return (ScaleSequence.constant(0.0), ScaleSequence.constant(3.0))
            case FamilyName.AFFINE:
                return (ScaleSequence.affine(1.0, 1.0), ScaleSequence.affine(2.0, 0.0))
            case FamilyName.R1:
                return (ScaleSequence.affine(1.0, 1.0), ScaleSequence.affine(1.0, 0.0))
            case FamilyName.RA:
                slope = 0.5 * min(float(self.a), 2.0)
                return (ScaleSequence.affine(slope, 1.0), ScaleSequence.constant(2.0))
            case FamilyName.LOG1:
                return (ScaleSequence.log_affine(1.0, 1.0), ScaleSequence.log_affine(2.0, 0.0))
            case FamilyName.LOG:
                return (ScaleSequence.log_affine(1.0, 1.0), ScaleSequence.log_affine(1.0, 0.0))
            case FamilyName.FULL:
                return (ScaleSequence.affine(1.0, 1.0), ScaleSequence.affine(3.0, 2.0))

    def admissible_slopes(self, step: float = 0.25, a_max: float = 5.0) -> list[float]:
        """Witness slopes searched, ascending."""
        match self.name:
            case FamilyName.BOUNDED | FamilyName.FULL:
                return [0.0]
            case FamilyName.R1 | FamilyName.LOG:
                return [1.0]
            case FamilyName.RA:
                return [s for s in slope_grid(step, a_max) if s < float(self.a)]
            case FamilyName.AFFINE | FamilyName.LOG1:
                return slope_grid(step, a_max)

    def witness(self, slope: float, intercept: float) -> ScaleSequence:
        """The family member slope·basis(n) + intercept."""
        match self.basis:
            case Basis.CONSTANT:
                return ScaleSequence.constant(intercept)
            case Basis.LINEAR:
                return ScaleSequence.affine(slope, intercept)
            case Basis.LOG:
                return ScaleSequence.log_affine(slope, intercept)
            case Basis.POINTWISE:
                raise TypeError("pointwise families take tabulated witnesses")

    def contains(self, seq: ScaleSequence) -> bool:
        """Syntactic membership of a closed-form sequence."""
        match self.name:
            case FamilyName.FULL:
                return True
            case FamilyName.BOUNDED:
                return seq.kind is SequenceKind.CONSTANT
            case FamilyName.AFFINE:
                return seq.kind in (SequenceKind.CONSTANT, SequenceKind.AFFINE)
            case FamilyName.R1:
                return seq.kind is SequenceKind.CONSTANT or (
                    seq.kind is SequenceKind.AFFINE and seq.a <= 1.0
                )
            case FamilyName.RA:
                return seq.kind is SequenceKind.CONSTANT or (
                    seq.kind is SequenceKind.AFFINE and seq.a < float(self.a)
                )
            case FamilyName.LOG:
                return seq.kind is SequenceKind.LOG_AFFINE and seq.a == 1.0
            case FamilyName.LOG1:
                return seq.kind in (SequenceKind.CONSTANT, SequenceKind.LOG_AFFINE)

    # -- profile membership ---------------------------------------------------

    def accepts(
        self,
        exponents,
        tol: float = 0.25,
        b_max: float = 3.0,
        a_max: float = 5.0,
    ) -> bool:
        """Finite-range membership of a fitted exponent sequence.

        The sequence is clamped at 0 (decay is bounded growth) and replaced
        by its running maximum; the constant E(0) is excluded, so only the
        increments D(n) = E(n) − E(0) decide.

        Rules
        -----
        1. B: D(n) ≤ tol.
        2. R1: fitted slope of D ≤ 1 + tol and D(n) − n ≤ b_max.
        3. Ra(a): for a > 1 whatever R1 accepts; otherwise fitted slope < a
           and D(n) − a·n ≤ b_max.
        4. A / Log1 / L_og: the same with their basis and slope bound.
        5. Full: always.
        """
        d = increments(exponents)
        if self.name is FamilyName.FULL:
            return True
        if self.name is FamilyName.BOUNDED:
            return bool(d.max() <= tol)

        basis = basis_values(self.basis, len(d) - 1)
        fitted = _slope(basis, d)
        match self.name:
            case FamilyName.R1 | FamilyName.LOG:
                return fitted <= 1.0 + tol and bool(np.max(d - basis) <= b_max)
            case FamilyName.RA:
                a = float(self.a)
                if math.isinf(a):
                    return True
                if a > 1.0 and RegularScaleFamily.r1().accepts(exponents, tol, b_max, a_max):
                    return True
                return fitted < a and bool(np.max(d - a * basis) <= b_max)
            case FamilyName.AFFINE | FamilyName.LOG1:
                return fitted <= a_max and bool(np.max(d - a_max * basis) <= b_max)
        return False

    def margin(
        self,
        exponents,
        tol: float = 0.25,
        b_max: float = 3.0,
        a_max: float = 5.0,
    ) -> float:
        """Signed distance to the membership boundary; nonnegative when accepted.

        Ra's own slope bound is strict, so a zero margin there is a rejection;
        for a > 1 Ra takes the larger of its own margin and R1's.
        """
        d = increments(exponents)
        if self.name is FamilyName.FULL or (
            self.name is FamilyName.RA and math.isinf(float(self.a))
        ):
            return math.inf
        if self.name is FamilyName.BOUNDED:
            return float(tol - d.max())
        basis = basis_values(self.basis, len(d) - 1)
        fitted = _slope(basis, d)
        match self.name:
            case FamilyName.R1 | FamilyName.LOG:
                slope_cap, rate = 1.0 + tol, 1.0
            case FamilyName.RA:
                slope_cap = rate = float(self.a)
                own = min(slope_cap - fitted, b_max - np.max(d - rate * basis))
                if slope_cap <= 1.0:
                    return float(own)
                return float(max(own, RegularScaleFamily.r1().margin(exponents, tol, b_max)))
            case _:
                slope_cap = rate = a_max
        return float(min(slope_cap - fitted, b_max - np.max(d - rate * basis)))


def increments(exponents) -> np.ndarray:
    """Clamped running maximum minus its first entry."""
    values = np.nan_to_num(np.asarray(exponents, dtype=float), nan=0.0, neginf=0.0)
    envelope = np.maximum.accumulate(np.maximum(values, 0.0))
    return envelope - envelope[0]


def finite_table(table) -> np.ndarray:
    """Exponent table with −∞ sentinels replaced by the smallest finite entry."""
    grid = np.asarray(table, dtype=float)
    finite = grid[np.isfinite(grid)]
    fill = float(finite.min()) if finite.size else 0.0
    return np.where(np.isfinite(grid), grid, fill)


def _slope(basis: np.ndarray, values: np.ndarray) -> float:
    if np.ptp(basis) == 0.0:
        return 0.0
    return float(np.polyfit(basis, values, 1)[0])


class TwoIndexScaleFamily(BaseModel):
    """A one-index family lifted to growth sequences indexed by (q, l)."""

    model_config = ConfigDict(frozen=True)

    base: RegularScaleFamily
    lift: Lift

    def accepts(self, table, tol: float = 0.25, b_max: float = 3.0) -> bool:
        """Membership of a (Q+1)×(L+1) exponent table, rows q, columns l."""
        grid = np.asarray(table, dtype=float)
        match self.lift:
            case Lift.FULL:
                return True
            case Lift.BOUNDED:
                finite = np.where(np.isfinite(grid), grid, 0.0)
                return bool(np.max(finite) - finite[0, 0] <= tol)
            case Lift.U:
                return q_variation(grid) <= tol and self.base.accepts(grid[0, :], tol, b_max)
            case Lift.D:
                return l_variation(grid) <= tol and self.base.accepts(grid[:, 0], tol, b_max)


def q_variation(table: np.ndarray) -> float:
    """max over (q,l) of |N(q,l) − N(0,l)|."""
    grid = finite_table(table)
    return float(np.max(np.abs(grid - grid[0:1, :])))


def l_variation(table: np.ndarray) -> float:
    """max over (q,l) of |N(q,l) − N(q,0)|."""
    return q_variation(np.asarray(table, dtype=float).T)
