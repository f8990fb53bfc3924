"""Exception hierarchy.

Numerical outcomes (an axiom that fails, a net that is not negligible) are
report values.  Exceptions are reserved for inputs an operation cannot work
with; each carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class GenfuncError(Exception):
    """Base class for all package errors."""

    exit_code: int = 4


class ConfigError(GenfuncError):
    """A run configuration violates a named constraint."""


class RangeTooSmall(GenfuncError):
    """Finite-range search bounds are too small for a meaningful check."""


class EvaluationOutOfRange(GenfuncError):
    """A tabulated sequence was evaluated beyond its table."""


class InsufficientPoints(GenfuncError):
    """Fewer than four usable (ε, value) pairs for a regression."""


class BoundaryDecayViolation(GenfuncError):
    """Frames do not decay at the box boundary (not in the rapidly decreasing regime)."""


class UnderResolved(GenfuncError):
    """The grid spacing cannot resolve the requested ε."""


class MomentValidationFailed(GenfuncError):
    """The constructed mollifier failed its mass, moment or decay validation."""


class AliasingError(GenfuncError):
    """The plateau support radius reaches the Nyquist frequency."""


class Unclassifiable(GenfuncError):
    """A growth profile is not power-law moderate at this resolution."""

    exit_code = 3


class ConeTooThin(GenfuncError):
    """A cone holds too few frequency nodes beyond its exclusion radius."""


class SupportNotContained(GenfuncError):
    """Frames exceed the plateau of the cutoff they are multiplied with."""


class PreconditionViolated(GenfuncError):
    """An operation was called on an input outside its domain."""


class SubboxOutOfRange(GenfuncError):
    """A sub-box is not contained in the domain box."""


class ConvolutionRuleMissing(GenfuncError):
    """The catalog has no convolution rule for a spec in this embedding."""


class DivisionByFloor(GenfuncError):
    """A ratio denominator vanished below the numerical floor."""
