import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsdirac.errors import ParameterError, PoleInC
from wsdirac.special import hyp2f1_terminating, jacobi, log_pochhammer


def test_jacobi_low_orders():
    assert jacobi(0, 0.3, 2.0, 0.7) == 1.0
    assert jacobi(1, 0.0, 0.0, 0.0) == 0.0
    assert jacobi(2, 1.0, 1.0, 1.0) == 3.0


@pytest.mark.parametrize("al,be,x", [(0.5, 1.5, 0.3), (2.0, -0.5, -0.8), (7.0, 3.0, 0.99)])
def test_jacobi_n2_closed_form(al, be, x):
    # P_2 from its explicit polynomial
    c = [
        (al + 1) * (al + 2) / 2,
        (al + 2) * (al + be + 3) / 2,
        (al + be + 3) * (al + be + 4) / 8,
    ]
    s = (1 - x)
    expect = c[0] - c[1] * s + c[2] * s * s
    assert jacobi(2, al, be, x) == pytest.approx(expect, rel=1e-14)


def test_jacobi_endpoint_binomial():
    for n in range(8):
        binom = math.gamma(n + 3.5) / (math.gamma(n + 1) * math.gamma(3.5))
        assert jacobi(n, 2.5, 0.7, 1.0) == pytest.approx(binom, rel=1e-13)


def test_jacobi_parameter_bounds():
    with pytest.raises(ParameterError):
        jacobi(2, -1.0, 0.0, 0.3)
    with pytest.raises(ParameterError):
        jacobi(2, 0.0, -1.5, 0.3)


def test_jacobi_array_matches_scalar():
    x = np.linspace(-1, 1, 31)
    arr = jacobi(6, 3.3, 1.2, x)
    assert np.array_equal(arr, np.array([jacobi(6, 3.3, 1.2, float(v)) for v in x]))


def test_hyp2f1_small_cases():
    assert hyp2f1_terminating(0, 4.0, 2.0, 0.3) == 1.0
    assert hyp2f1_terminating(2, 3.0, 2.0, 1.0) == 0.0


@given(st.floats(-10, 10), st.floats(0.1, 10), st.floats(-2, 2))
def test_hyp2f1_one_term_tail(b, c, z):
    assert hyp2f1_terminating(1, b, c, z) == pytest.approx(1 - b / c * z, rel=1e-14, abs=1e-14)


def test_hyp2f1_pole_in_c():
    with pytest.raises(PoleInC):
        hyp2f1_terminating(3, 1.0, -1.0, 0.5)


@pytest.mark.parametrize("n,b,c,z", [(10, 55.6, 45.8, 0.97), (9, 20.3, 10.7, 0.86), (7, 12.0, 3.5, 0.5)])
def test_hyp2f1_against_mpmath_under_cancellation(n, b, c, z):
    mp.mp.dps = 40
    ref = mp.hyp2f1(-n, b, c, z)
    got = hyp2f1_terminating(n, b, c, z)
    assert abs(got - float(ref)) <= 1e-15 * abs(float(ref)) + 1e-300


@given(
    st.integers(0, 10), st.floats(-0.9, 10), st.floats(-0.9, 10), st.floats(0, 1),
)
def test_jacobi_hyp2f1_identity(n, al, be, s):
    J = jacobi(n, al, be, 1 - 2 * s)
    pref = math.exp(math.lgamma(al + 1 + n) - math.lgamma(al + 1) - math.lgamma(n + 1))
    H = pref * hyp2f1_terminating(n, n + al + be + 1, al + 1, s)
    assert abs(J - H) <= 1e-11 * abs(J) or J == H


def test_log_pochhammer_signs():
    assert log_pochhammer(3.0, 0) == (0.0, 1.0)
    lg, sg = log_pochhammer(-2.5, 3)  # (-2.5)(-1.5)(-0.5)
    assert sg == -1.0 and math.exp(lg) == pytest.approx(1.875)
    lg, sg = log_pochhammer(40.0, 5)
    assert sg == 1.0 and math.exp(lg) == pytest.approx(40 * 41 * 42 * 43 * 44, rel=1e-13)
