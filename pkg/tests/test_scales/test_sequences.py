import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genfunc.errors import EvaluationOutOfRange
from genfunc.scales.sequences import ScaleSequence, SequenceKind, leq


class TestScaleSequence:
    def test_closed_forms(self):
        assert ScaleSequence.constant(3.0).values(3).tolist() == [3.0, 3.0, 3.0, 3.0]
        assert ScaleSequence.affine(2.0, 1.0).values(3).tolist() == [1.0, 3.0, 5.0, 7.0]
        log = ScaleSequence.log_affine(1.0, 1.0)
        assert log(0) == 1.0
        assert log(1) == 1.0
        assert log(10) == pytest.approx(math.log(10) + 1.0)

    def test_tabulated_beyond_table_raises(self):
        seq = ScaleSequence.tabulated([0.0, 1.0, 4.0])
        assert seq(2) == 4.0
        with pytest.raises(EvaluationOutOfRange):
            seq.values(3)

    def test_negative_table_rejected(self):
        with pytest.raises(ValueError):
            ScaleSequence.tabulated([1.0, -1.0])

    def test_closed_form_takes_no_table(self):
        with pytest.raises(ValueError):
            ScaleSequence(kind=SequenceKind.AFFINE, a=1.0, table=(1.0,))

    def test_round_trips_through_json(self):
        seq = ScaleSequence.log_affine(2.0, 0.5)
        assert ScaleSequence.model_validate_json(seq.model_dump_json()) == seq

    def test_describe(self):
        assert ScaleSequence.affine(1.0, 2.0).describe() == "N(n)=1n+2"
        assert ScaleSequence.tabulated([1, 2]).describe() == "N=table[2]"


class TestLeq:
    def test_zero_below_identity(self):
        assert leq(ScaleSequence.constant(0.0), ScaleSequence.affine(1.0), 20)

    def test_shifted_identity_not_below(self):
        assert not leq(ScaleSequence.affine(1.0, 1.0), ScaleSequence.affine(1.0), 20)

    def test_log_below_identity_on_range(self):
        two_log = ScaleSequence.tabulated(2.0 * np.log(np.arange(21) + 1.0))
        assert leq(two_log, ScaleSequence.affine(1.0), 20)


affine = st.builds(
    ScaleSequence.affine,
    st.floats(min_value=0.0, max_value=5.0),
    st.floats(min_value=0.0, max_value=20.0),
)


@given(affine)
def test_leq_reflexive(seq):
    assert leq(seq, seq, 30)


@given(affine, affine, affine)
def test_leq_transitive(a, b, c):
    if leq(a, b, 30) and leq(b, c, 30):
        assert leq(a, c, 30)
