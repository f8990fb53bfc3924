"""Catalog entries: the test distributions the embeddings act on."""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, model_validator


# ---------------------------------------------------------------------------
# Enumerations
# ---------------------------------------------------------------------------

class SpecTag(str, Enum):
    """Shape of a catalog entry."""
    DELTA_DERIV = "delta_deriv"
    HEAVISIDE = "heaviside"
    SMOOTH = "smooth"
    CONT_DERIV = "cont_deriv"
    WEIGHTED_POLY = "weighted_poly"
    TENSOR = "tensor"
    COMBINATION = "combination"


class ClassTag(str, Enum):
    """Distribution spaces an entry belongs to."""
    E_PRIME = "E'"
    OC_PRIME = "O'_C"
    OM_PRIME = "O'_M"
    S_PRIME = "S'"
    S = "S"
    SMOOTH = "C∞"


SMOOTH_PROFILES = ("gaussian", "gaussian_half", "bump", "square", "zero")
CONTINUOUS_PROFILES = ("ramp", "abs", "tent")

_COMPACT_SINGULAR = frozenset(
    {ClassTag.E_PRIME, ClassTag.OM_PRIME, ClassTag.OC_PRIME, ClassTag.S_PRIME}
)
_RAPID = frozenset(
    {ClassTag.S, ClassTag.SMOOTH, ClassTag.OM_PRIME, ClassTag.OC_PRIME, ClassTag.S_PRIME}
)
_SMOOTH_TAGS: dict[str, frozenset[ClassTag]] = {
    "gaussian": _RAPID,
    "gaussian_half": _RAPID,
    "bump": _RAPID | {ClassTag.E_PRIME},
    "square": frozenset({ClassTag.SMOOTH, ClassTag.S_PRIME}),
    "zero": frozenset(ClassTag),
}
_CONTINUOUS_TAGS: dict[str, frozenset[ClassTag]] = {
    "ramp": frozenset({ClassTag.S_PRIME}),
    "abs": frozenset({ClassTag.S_PRIME}),
    "tent": _COMPACT_SINGULAR,
}


# ---------------------------------------------------------------------------
# Spec model
# ---------------------------------------------------------------------------

class Term(BaseModel):
    coef: float
    spec: "DistributionSpec"


class DistributionSpec(BaseModel):
    """One catalog distribution.

    Parses from JSON such as ``{"tag": "delta_deriv", "k": 1}``.  Tensor
    entries carry one factor per axis; combinations are finite linear sums.
    """

    tag: SpecTag
    k: int = Field(default=0, ge=0, le=4)
    at: float = 0.0
    f: str | None = None
    alpha: int = Field(default=0, ge=0, le=3)
    degree: int = Field(default=0, ge=0, le=6)
    decay: float = Field(default=1.0, gt=0.0)
    factors: list["DistributionSpec"] = Field(default_factory=list)
    terms: list[Term] = Field(default_factory=list)

    @model_validator(mode="after")
    def _consistent(self) -> "DistributionSpec":
        match self.tag:
            case SpecTag.SMOOTH:
                if self.f not in SMOOTH_PROFILES:
                    raise ValueError(f"smooth profile must be one of {SMOOTH_PROFILES}")
            case SpecTag.CONT_DERIV:
                if self.f not in CONTINUOUS_PROFILES:
                    raise ValueError(f"continuous profile must be one of {CONTINUOUS_PROFILES}")
            case SpecTag.TENSOR:
                if len(self.factors) != 2 or any(s.dim != 1 for s in self.factors):
                    raise ValueError("tensor entries take two one-dimensional factors")
            case SpecTag.COMBINATION:
                if not self.terms:
                    raise ValueError("combination needs at least one term")
                if len({t.spec.dim for t in self.terms}) != 1:
                    raise ValueError("combination terms must share a dimension")
        return self

    # -- constructors ---------------------------------------------------------

    @classmethod
    def delta(cls, k: int = 0, at: float = 0.0) -> "DistributionSpec":
        return cls(tag=SpecTag.DELTA_DERIV, k=k, at=at)

    @classmethod
    def heaviside(cls, at: float = 0.0) -> "DistributionSpec":
        return cls(tag=SpecTag.HEAVISIDE, at=at)

    @classmethod
    def smooth(cls, f: str) -> "DistributionSpec":
        return cls(tag=SpecTag.SMOOTH, f=f)

    @classmethod
    def cont_deriv(cls, f: str, alpha: int = 1) -> "DistributionSpec":
        return cls(tag=SpecTag.CONT_DERIV, f=f, alpha=alpha)

    @classmethod
    def weighted_poly(cls, degree: int, decay: float = 1.0) -> "DistributionSpec":
        return cls(tag=SpecTag.WEIGHTED_POLY, degree=degree, decay=decay)

    @classmethod
    def tensor(cls, first: "DistributionSpec", second: "DistributionSpec") -> "DistributionSpec":
        return cls(tag=SpecTag.TENSOR, factors=[first, second])

    @classmethod
    def combination(cls, *pairs: tuple[float, "DistributionSpec"]) -> "DistributionSpec":
        return cls(tag=SpecTag.COMBINATION, terms=[Term(coef=c, spec=s) for c, s in pairs])

    # -- descriptors ----------------------------------------------------------

    @property
    def dim(self) -> int:
        if self.tag is SpecTag.TENSOR:
            return len(self.factors)
        if self.tag is SpecTag.COMBINATION:
            return self.terms[0].spec.dim
        return 1

    @property
    def class_tags(self) -> frozenset[ClassTag]:
        match self.tag:
            case SpecTag.DELTA_DERIV:
                return _COMPACT_SINGULAR
            case SpecTag.HEAVISIDE:
                return frozenset({ClassTag.S_PRIME})
            case SpecTag.SMOOTH:
                return _SMOOTH_TAGS[self.f]
            case SpecTag.CONT_DERIV:
                return _CONTINUOUS_TAGS[self.f]
            case SpecTag.WEIGHTED_POLY:
                return _RAPID
            case SpecTag.TENSOR:
                return frozenset.intersection(*(s.class_tags for s in self.factors))
            case SpecTag.COMBINATION:
                return frozenset.intersection(*(t.spec.class_tags for t in self.terms))

    def has(self, tag: ClassTag) -> bool:
        return tag in self.class_tags

    @property
    def name(self) -> str:
        match self.tag:
            case SpecTag.DELTA_DERIV:
                base = "delta" if self.k == 0 else f"delta{self.k}"
                return base if self.at == 0 else f"{base}@{self.at:g}"
            case SpecTag.HEAVISIDE:
                return "heaviside" if self.at == 0 else f"heaviside@{self.at:g}"
            case SpecTag.SMOOTH:
                return str(self.f)
            case SpecTag.CONT_DERIV:
                return f"d{self.alpha}_{self.f}"
            case SpecTag.WEIGHTED_POLY:
                return f"x{self.degree}_exp{self.decay:g}"
            case SpecTag.TENSOR:
                return "x".join(s.name for s in self.factors)
            case SpecTag.COMBINATION:
                return "+".join(f"{t.coef:g}*{t.spec.name}" for t in self.terms)

    def derivative(self) -> "DistributionSpec":
        """The catalog entry of ∂ₓ of a one-dimensional entry, where the catalog has one."""
        match self.tag:
            case SpecTag.DELTA_DERIV:
                return DistributionSpec.delta(self.k + 1, self.at)
            case SpecTag.HEAVISIDE:
                return DistributionSpec.delta(0, self.at)
            case SpecTag.CONT_DERIV:
                return DistributionSpec.cont_deriv(self.f, self.alpha + 1)
            case SpecTag.COMBINATION:
                return DistributionSpec.combination(
                    *((t.coef, t.spec.derivative()) for t in self.terms)
                )
        raise ValueError(f"no catalog derivative for {self.name}")


Term.model_rebuild()

SHORT_NAMES: dict[str, DistributionSpec] = {
    "delta": DistributionSpec.delta(0),
    "delta1": DistributionSpec.delta(1),
    "delta2": DistributionSpec.delta(2),
    "heaviside": DistributionSpec.heaviside(),
    "gaussian": DistributionSpec.smooth("gaussian"),
    "bump": DistributionSpec.smooth("bump"),
    "heaviside_x_bump": DistributionSpec.tensor(
        DistributionSpec.heaviside(), DistributionSpec.smooth("bump")
    ),
}


def parse_spec(text: str) -> DistributionSpec:
    """A short name, an inline JSON document, or a path to a JSON file."""
    text = text.strip()
    if text in SHORT_NAMES:
        return SHORT_NAMES[text]
    if text.startswith("{"):
        return DistributionSpec.model_validate(json.loads(text))
    path = Path(text)
    if path.suffix == ".json" and path.exists():
        return DistributionSpec.model_validate_json(path.read_text())
    raise ValueError(f"unknown distribution {text!r}; short names are {sorted(SHORT_NAMES)}")
