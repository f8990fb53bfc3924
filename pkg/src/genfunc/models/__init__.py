from .distribution import ClassTag, DistributionSpec, SpecTag, Term, parse_spec
from .run_config import (
    BoxConfig,
    LadderConfig,
    MicrolocalConfig,
    MollifierConfig,
    RunConfig,
    Tolerances,
)

__all__ = [
    "BoxConfig",
    "ClassTag",
    "DistributionSpec",
    "LadderConfig",
    "MicrolocalConfig",
    "MollifierConfig",
    "RunConfig",
    "SpecTag",
    "Term",
    "Tolerances",
    "parse_spec",
]
