import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gammainc, gammaincc

from asymchar.incgamma import gammap, gammaq, upper_gamma


@settings(max_examples=300, deadline=None)
@given(st.floats(0.05, 60), st.floats(0, 200))
def test_against_scipy(a, u):
    assert gammaq(a, u) == pytest.approx(gammaincc(a, u), rel=1e-10, abs=1e-300)
    assert gammap(a, u) == pytest.approx(gammainc(a, u), rel=1e-10, abs=1e-14)


def test_special_values():
    assert gammaq(1, 2.0) == pytest.approx(math.exp(-2), rel=1e-14)
    assert gammaq(0.5, 1.0) == pytest.approx(math.erfc(1.0), rel=1e-13)
    assert upper_gamma(3, 0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        gammaq(-1, 1)
