"""Finite-range checks of the regularity axioms with parameterized witness search.

A family is regular when it is overstable by translation and by maximum and
stable under superadditive combination.  Over a finite range 0..n_max every
target is dominated by *some* member once the intercept is large enough, so a
witness is only accepted when its intercept is within ``b_max`` and does not
keep growing with the horizon: the intercept required on 0..n_max may exceed
the one required on 0..n_max/2 by at most ``tol``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, Field

from genfunc.errors import PreconditionViolated, RangeTooSmall
from genfunc.scales.families import Basis, RegularScaleFamily, basis_values
from genfunc.scales.sequences import ScaleSequence
from genfunc.utils.logging import log
from genfunc.utils.parallel import ordered_map


# ---------------------------------------------------------------------------
# Report models
# ---------------------------------------------------------------------------

class Axiom(str, Enum):
    """The three closure conditions of a regular family."""
    TRANSLATION = "translation"
    MAX = "max"
    SUPERADDITIVE = "superadditive"


class SearchBounds(BaseModel):
    n_max: int
    k_max: int = 0
    b_max: float
    slope_step: float
    a_max: float
    tol: float


class Witness(BaseModel):
    """A found member, or the concrete instance that defeated the search.

    For a failure, ``lhs`` is the combined input at ``indices`` and ``rhs``
    the best family member evaluated at the same point; ``lhs > rhs``.
    """

    inputs: list[ScaleSequence] = Field(default_factory=list)
    sequence: ScaleSequence | None = None
    indices: list[int] = Field(default_factory=list)
    lhs: float | None = None
    rhs: float | None = None

    def reproduce(self, axiom: Axiom) -> bool:
        """Re-evaluate the recorded inequality; True iff it is still violated."""
        if self.sequence is None or self.lhs is None:
            return False
        lhs = _combine(axiom, self.inputs, self.indices)
        point = sum(self.indices) if axiom is Axiom.SUPERADDITIVE else self.indices[-1]
        rhs = self.sequence(point)
        return lhs == self.lhs and rhs == self.rhs and lhs > rhs


class AxiomReport(BaseModel):
    axiom: Axiom
    family: str
    passed: bool
    witness: Witness | None = None
    search_bounds: SearchBounds
    instances: int = 0


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Instance:
    inputs: tuple[ScaleSequence, ...]
    shift: tuple[int, ...]
    target: np.ndarray


@dataclass(frozen=True)
class _Outcome:
    found: ScaleSequence | None
    intercept: float
    witness: Witness | None


def _combine(axiom: Axiom, inputs: list[ScaleSequence], indices: list[int]) -> float:
    match axiom:
        case Axiom.TRANSLATION:
            k, k_prime, n = indices
            return inputs[0](n + k) + k_prime
        case Axiom.MAX:
            n = indices[-1]
            return max(inputs[0](n), inputs[1](n))
        case Axiom.SUPERADDITIVE:
            l1, l2 = indices
            return inputs[0](l1) + inputs[1](l2)


def _search(
    family: RegularScaleFamily,
    axiom: Axiom,
    inst: _Instance,
    bounds: SearchBounds,
) -> _Outcome:
    target = inst.target
    n_max = len(target) - 1
    if family.basis is Basis.POINTWISE:
        return _Outcome(ScaleSequence.tabulated(np.maximum(target, 0.0)), 0.0, None)

    basis = basis_values(family.basis, n_max)
    half = n_max // 2
    slopes = family.admissible_slopes(bounds.slope_step, bounds.a_max)
    if not slopes:
        raise PreconditionViolated(f"{family.label} admits no witness slope on this grid")
    for slope in slopes:
        running = np.maximum.accumulate(target - slope * basis)
        b_full = max(0.0, float(running[n_max]))
        b_half = max(0.0, float(running[half]))
        if b_full <= bounds.b_max and b_full - b_half <= bounds.tol:
            return _Outcome(family.witness(slope, b_full), b_full, None)

    # Every slope failed; report against the most generous one.
    slope = slopes[-1]
    excess = target - slope * basis
    b_ref = min(max(0.0, float(np.max(excess[: half + 1]))), bounds.b_max)
    reference = family.witness(slope, b_ref)
    point = int(np.argmax(excess - b_ref))
    indices = _indices_at(axiom, inst, point)
    witness = Witness(
        inputs=list(inst.inputs),
        sequence=reference,
        indices=indices,
        lhs=_combine(axiom, list(inst.inputs), indices),
        rhs=reference(point),
    )
    return _Outcome(None, float("nan"), witness)


def _indices_at(axiom: Axiom, inst: _Instance, point: int) -> list[int]:
    match axiom:
        case Axiom.TRANSLATION:
            return [inst.shift[0], inst.shift[1], point]
        case Axiom.MAX:
            return [point]
        case Axiom.SUPERADDITIVE:
            first = inst.inputs[0].values(point)
            second = inst.inputs[1].values(point)[::-1]
            l1 = int(np.argmax(first + second))
            return [l1, point - l1]


def _run(
    family: RegularScaleFamily,
    axiom: Axiom,
    instances: list[_Instance],
    bounds: SearchBounds,
    jobs: int,
) -> AxiomReport:
    outcomes = ordered_map(lambda inst: _search(family, axiom, inst, bounds), instances, jobs)
    for inst, outcome in zip(instances, outcomes):
        if outcome.found is None:
            log.info("%s fails %s at %s", family.label, axiom.value, outcome.witness.indices)
            return AxiomReport(
                axiom=axiom,
                family=family.label,
                passed=False,
                witness=outcome.witness,
                search_bounds=bounds,
                instances=len(instances),
            )

    # Report the binding instance: the first one needing the largest intercept.
    binding = max(
        range(len(instances)),
        key=lambda i: (np.nan_to_num(outcomes[i].intercept, nan=-1.0), -i),
    )
    inst = instances[binding]
    witness = Witness(
        inputs=list(inst.inputs),
        sequence=outcomes[binding].found,
        indices=list(inst.shift),
    )
    log.debug("%s satisfies %s on %d instances", family.label, axiom.value, len(instances))
    return AxiomReport(
        axiom=axiom,
        family=family.label,
        passed=True,
        witness=witness,
        search_bounds=bounds,
        instances=len(instances),
    )


# ---------------------------------------------------------------------------
# Public checks
# ---------------------------------------------------------------------------

def check_overstability(
    family: RegularScaleFamily,
    n_max: int = 50,
    k_max: int = 5,
    b_max: float = 20.0,
    tol: float = 0.25,
    slope_step: float = 0.25,
    a_max: float = 5.0,
    jobs: int = 1,
) -> AxiomReport:
    """Translation axiom: for every generator N and k, k′ ≤ k_max some member
    N′ satisfies N(n+k) + k′ ≤ N′(n) on 0..n_max."""
    if n_max < 4 or k_max < 2:
        raise RangeTooSmall(f"need n_max ≥ 4 and k_max ≥ 2, got n_max={n_max}, k_max={k_max}")
    generators = family.generator_set()
    if not generators:
        raise PreconditionViolated(f"{family.label} has no generators")
    bounds = SearchBounds(
        n_max=n_max, k_max=k_max, b_max=b_max, slope_step=slope_step, a_max=a_max, tol=tol
    )
    instances = []
    for gen in generators:
        table = gen.values(n_max + k_max)
        for k, k_prime in itertools.product(range(k_max + 1), repeat=2):
            instances.append(
                _Instance((gen,), (k, k_prime), table[k : k + n_max + 1] + k_prime)
            )
    return _run(family, Axiom.TRANSLATION, instances, bounds, jobs)


def check_max_closure(
    family: RegularScaleFamily,
    n_max: int = 50,
    b_max: float = 20.0,
    tol: float = 0.25,
    slope_step: float = 0.25,
    a_max: float = 5.0,
    jobs: int = 1,
) -> AxiomReport:
    """Maximum axiom: for generators N₁, N₂ some member dominates max(N₁, N₂)."""
    if n_max < 4:
        raise RangeTooSmall(f"need n_max ≥ 4, got {n_max}")
    bounds = SearchBounds(n_max=n_max, b_max=b_max, slope_step=slope_step, a_max=a_max, tol=tol)
    generators = family.generator_set()
    instances = [
        _Instance((g1, g2), (i, j), np.maximum(g1.values(n_max), g2.values(n_max)))
        for (i, g1), (j, g2) in itertools.product(enumerate(generators), repeat=2)
    ]
    return _run(family, Axiom.MAX, instances, bounds, jobs)


def superadditive_envelope(n1: ScaleSequence, n2: ScaleSequence, n_max: int) -> np.ndarray:
    """T(l) = max over l₁+l₂ = l of N₁(l₁) + N₂(l₂), for l in 0..n_max."""
    a = n1.values(n_max)
    b = n2.values(n_max)
    return np.array([np.max(a[: l + 1] + b[l::-1]) for l in range(n_max + 1)])


def check_superadditive_closure(
    family: RegularScaleFamily,
    n_max: int = 50,
    b_max: float = 20.0,
    tol: float = 0.25,
    slope_step: float = 0.25,
    a_max: float = 5.0,
    jobs: int = 1,
) -> AxiomReport:
    """Superadditivity: for generators N₁, N₂ some member N has
    N₁(l₁) + N₂(l₂) ≤ N(l₁+l₂) whenever l₁+l₂ ≤ n_max."""
    if n_max < 8:
        raise RangeTooSmall(f"need n_max ≥ 8, got {n_max}")
    bounds = SearchBounds(n_max=n_max, b_max=b_max, slope_step=slope_step, a_max=a_max, tol=tol)
    generators = family.generator_set()
    instances = [
        _Instance((g1, g2), (i, j), superadditive_envelope(g1, g2, n_max))
        for (i, g1), (j, g2) in itertools.product(enumerate(generators), repeat=2)
    ]
    return _run(family, Axiom.SUPERADDITIVE, instances, bounds, jobs)


def check_all(family: RegularScaleFamily, **kwargs) -> list[AxiomReport]:
    """Translation, maximum and superadditivity, in that order."""
    k_max = kwargs.pop("k_max", 5)
    return [
        check_overstability(family, k_max=k_max, **kwargs),
        check_max_closure(family, **kwargs),
        check_superadditive_closure(family, **kwargs),
    ]
