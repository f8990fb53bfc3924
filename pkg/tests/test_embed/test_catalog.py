import math

import numpy as np
import pytest

from genfunc.embed.catalog import convolve, is_smooth, linear_convolution, sample
from genfunc.errors import ConvolutionRuleMissing, PreconditionViolated
from genfunc.grid.box import Box
from genfunc.models.distribution import ClassTag, DistributionSpec, SpecTag, parse_spec


def gaussian_kernel(box: Box, order: int, center: float) -> np.ndarray:
    return np.exp(-((box.nodes() - center) ** 2))


class TestDistributionSpec:
    def test_short_names(self):
        assert parse_spec("delta") == DistributionSpec.delta()
        assert parse_spec(" delta2 ").k == 2
        assert parse_spec("heaviside_x_bump").dim == 2

    def test_inline_json(self):
        spec = parse_spec('{"tag": "delta_deriv", "k": 1, "at": 2.0}')
        assert spec.tag is SpecTag.DELTA_DERIV
        assert spec.name == "delta1@2"

    def test_json_file(self, tmp_path):
        path = tmp_path / "ramp.json"
        path.write_text(DistributionSpec.cont_deriv("ramp", 2).model_dump_json())
        assert parse_spec(str(path)).name == "d2_ramp"

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            parse_spec("dirac")

    def test_derivatives(self):
        assert DistributionSpec.heaviside().derivative() == DistributionSpec.delta()
        assert DistributionSpec.delta(1).derivative().k == 2
        with pytest.raises(ValueError):
            DistributionSpec.smooth("gaussian").derivative()

    def test_class_tags(self):
        assert DistributionSpec.delta().has(ClassTag.OC_PRIME)
        heaviside = DistributionSpec.heaviside()
        assert heaviside.has(ClassTag.S_PRIME)
        assert not heaviside.has(ClassTag.OC_PRIME)
        mixed = DistributionSpec.combination((1.0, DistributionSpec.delta()), (1.0, heaviside))
        assert mixed.class_tags == frozenset({ClassTag.S_PRIME})

    def test_invalid_entries(self):
        with pytest.raises(ValueError):
            DistributionSpec.smooth("sinc")
        with pytest.raises(ValueError):
            DistributionSpec.tensor(DistributionSpec.delta(), parse_spec("heaviside_x_bump"))


class TestCatalog:
    def test_sample_smooth(self):
        box = Box.symmetric(4.0, 64)
        g = sample(DistributionSpec.smooth("square"), box)
        assert g.samples.real == pytest.approx(box.nodes() ** 2)
        assert is_smooth(DistributionSpec.weighted_poly(2))

    def test_sample_singular_rejected(self):
        with pytest.raises(PreconditionViolated):
            sample(DistributionSpec.heaviside(), Box.symmetric(4.0, 64))

    def test_gaussian_convolution(self):
        box = Box.symmetric(8.0, 1024)
        result = convolve(DistributionSpec.smooth("gaussian"), gaussian_kernel, box)
        x = box.nodes()
        exact = math.sqrt(math.pi / 2.0) * np.exp(-x * x / 2.0)
        assert np.max(np.abs(result.samples - exact)) < 1e-9

    def test_delta_uses_kernel_directly(self):
        box = Box.symmetric(8.0, 1024)
        result = convolve(DistributionSpec.delta(at=1.0), gaussian_kernel, box)
        assert result.samples.real == pytest.approx(gaussian_kernel(box, 0, 1.0))

    def test_heaviside_is_running_integral(self):
        box = Box.symmetric(8.0, 1024)
        result = convolve(DistributionSpec.heaviside(), gaussian_kernel, box).samples.real
        assert result[0] == 0.0
        assert result[-1] == pytest.approx(math.sqrt(math.pi), rel=1e-8)

    def test_linear_convolution_of_delta_sample(self):
        box = Box.symmetric(8.0, 1024)
        spike = np.zeros(box.n)
        spike[box.n // 2] = 1.0 / box.spacing[0]
        k = gaussian_kernel(box, 0, 0.0)
        assert linear_convolution(spike, k, box) == pytest.approx(k, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ConvolutionRuleMissing):
            convolve(parse_spec("heaviside_x_bump"), gaussian_kernel, Box.symmetric(4.0, 64))
