"""Growth sequences N: ℕ → ℝ₊ and the pointwise partial order between them."""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from genfunc.errors import EvaluationOutOfRange


class SequenceKind(str, Enum):
    """Closed forms a growth sequence can take."""
    CONSTANT = "constant"
    AFFINE = "affine"
    LOG_AFFINE = "log-affine"
    TABULATED = "tabulated"


def log_basis(n: np.ndarray) -> np.ndarray:
    """ln(max(n, 1)), the basis of log-affine sequences."""
    return np.log(np.maximum(np.asarray(n, dtype=float), 1.0))


class ScaleSequence(BaseModel):
    """A nonnegative sequence N(n), either in closed form or tabulated.

    Serializes to ``{"kind": ..., "a": ..., "b": ..., "table": [...]}``.
    """

    model_config = ConfigDict(frozen=True)

    kind: SequenceKind
    a: float = Field(default=0.0, ge=0.0)
    b: float = Field(default=0.0, ge=0.0)
    table: tuple[float, ...] = ()

    @model_validator(mode="after")
    def _check_shape(self) -> "ScaleSequence":
        if self.kind is SequenceKind.TABULATED:
            if not self.table:
                raise ValueError("tabulated sequence needs a non-empty table")
            if any(v < 0 or not math.isfinite(v) for v in self.table):
                raise ValueError("tabulated values must be finite and nonnegative")
        elif self.table:
            raise ValueError(f"{self.kind.value} sequence takes no table")
        return self

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, b: float) -> "ScaleSequence":
        return cls(kind=SequenceKind.CONSTANT, b=b)

    @classmethod
    def affine(cls, a: float, b: float = 0.0) -> "ScaleSequence":
        return cls(kind=SequenceKind.AFFINE, a=a, b=b)

    @classmethod
    def log_affine(cls, a: float, b: float = 0.0) -> "ScaleSequence":
        return cls(kind=SequenceKind.LOG_AFFINE, a=a, b=b)

    @classmethod
    def tabulated(cls, values) -> "ScaleSequence":
        return cls(kind=SequenceKind.TABULATED, table=tuple(float(v) for v in values))

    # -- evaluation -----------------------------------------------------------

    def values(self, n_max: int) -> np.ndarray:
        """N(0), ..., N(n_max) as a float array."""
        n = np.arange(n_max + 1, dtype=float)
        match self.kind:
            case SequenceKind.CONSTANT:
                return np.full(n.shape, self.b)
            case SequenceKind.AFFINE:
                return self.a * n + self.b
            case SequenceKind.LOG_AFFINE:
                return self.a * log_basis(n) + self.b
            case SequenceKind.TABULATED:
                if n_max >= len(self.table):
                    raise EvaluationOutOfRange(
                        f"table of length {len(self.table)} evaluated up to n={n_max}"
                    )
                return np.asarray(self.table[: n_max + 1], dtype=float)

    def __call__(self, n: int) -> float:
        return float(self.values(n)[n])

    def describe(self) -> str:
        match self.kind:
            case SequenceKind.CONSTANT:
                return f"N≡{self.b:g}"
            case SequenceKind.AFFINE:
                return f"N(n)={self.a:g}n+{self.b:g}"
            case SequenceKind.LOG_AFFINE:
                return f"N(n)={self.a:g}ln(n)+{self.b:g}"
            case SequenceKind.TABULATED:
                return f"N=table[{len(self.table)}]"


def leq(n1: ScaleSequence, n2: ScaleSequence, n_max: int) -> bool:
    """True iff N1(n) ≤ N2(n) for every n in 0..n_max."""
    return bool(np.all(n1.values(n_max) <= n2.values(n_max)))
