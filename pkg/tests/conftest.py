"""Shared fixtures: one validated mollifier and small nets built from it.

The coarse configuration (2^14 nodes on [−8, 8], ε = 2^{−5..−7.5}) is enough
for every sup-based profile.  Checks that read the mass defect of θ_ε need
the fine configuration (2^17 nodes, ε = 2^{−6..−11}); the stretched
exponential tail of ρ is not below ε^4 on the coarse ladder.
"""

from __future__ import annotations

import pytest

from genfunc.embed.embeddings import embed_iota, embed_iota_S, embed_sigma
from genfunc.grid.box import Box
from genfunc.grid.function import geometric_ladder
from genfunc.grid.growth import GrowthProfile, ProfileAxis, ProfileEntry
from genfunc.mollifier.build import build_rho
from genfunc.models.distribution import DistributionSpec
from genfunc.models.run_config import MollifierConfig


@pytest.fixture(scope="session")
def mollifier():
    return build_rho(MollifierConfig().reference_box())


@pytest.fixture(scope="session")
def box() -> Box:
    return Box.symmetric(8.0, 2**14)


@pytest.fixture(scope="session")
def ladder() -> tuple[float, ...]:
    return geometric_ladder(5.0, 7.5, 0.5)


@pytest.fixture(scope="session")
def fine_box() -> Box:
    return Box.symmetric(8.0, 2**17)


@pytest.fixture(scope="session")
def fine_ladder() -> tuple[float, ...]:
    return geometric_ladder(6.0, 11.0)


@pytest.fixture(scope="session")
def iota_delta(mollifier, box, ladder):
    return embed_iota(DistributionSpec.delta(), mollifier, ladder, box)


@pytest.fixture(scope="session")
def iota_S_delta(mollifier, box, ladder):
    return embed_iota_S(DistributionSpec.delta(), mollifier, ladder, box)


@pytest.fixture(scope="session")
def sigma_gaussian(box, ladder):
    return embed_sigma(DistributionSpec.smooth("gaussian"), ladder, box)


@pytest.fixture(scope="session")
def sigma_bump(box, ladder):
    return embed_sigma(DistributionSpec.smooth("bump"), ladder, box)


@pytest.fixture
def make_profile():
    """Build a one-index profile from a list of exponents."""

    def build(exponents, axis=ProfileAxis.SPACE_L, residual=0.0) -> GrowthProfile:
        return GrowthProfile(
            axis=axis,
            entries=[
                ProfileEntry(index=(i,), exponent=e, intercept=0.0, residual=residual)
                for i, e in enumerate(exponents)
            ],
            ladder_used=geometric_ladder(5.0, 10.0),
        )

    return build
