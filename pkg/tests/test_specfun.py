import math

import mpmath as mp
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fracsobolev.specfun import (
    PoleError, d_gamma, falling_product, gamma_ratio, gamma_ratio_array, log_gamma,
    renorm_constant,
)


@pytest.mark.parametrize("x, expected", [(1, 0.0), (0.5, 0.5723649429247001), (5, math.log(24))])
def test_log_gamma_examples(x, expected):
    assert log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("x", [1e-3, 0.37, 2.5, 17.0, 480.0, 1e4])
def test_log_gamma_against_mpmath(x):
    assert log_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_log_gamma_domain(x):
    with pytest.raises(ValueError):
        log_gamma(x)


@pytest.mark.parametrize("x, g, expected", [(1.5, 1, 0.75), (2, 0, 1.0), (3, 2, 24.0)])
def test_gamma_ratio_examples(x, g, expected):
    assert gamma_ratio(x, g) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("x, g", [(0.3, 0.8), (0.2, 1.7), (-0.4, 0.9), (-1.3, 0.45), (2.0, -2.6)])
def test_gamma_ratio_mixed_signs_against_mpmath(x, g):
    expected = mp.gamma(x + g) / mp.gamma(x - g)
    assert gamma_ratio(x, g) == pytest.approx(float(expected), rel=1e-12)


@pytest.mark.parametrize("x, g", [(1.0, 1.0), (0.5, 1.5), (-1.0, 0.0), (0.5, -2.5)])
def test_gamma_ratio_poles(x, g):
    with pytest.raises(PoleError):
        gamma_ratio(x, g)


def test_gamma_ratio_near_pole_is_an_error():
    with pytest.raises(PoleError):
        gamma_ratio(1.0 + 1e-13, 1.0)


@given(st.floats(0.5, 50), st.floats(0.01, 1.99))
def test_reciprocity(x, g):
    for z in (x - g, x + g):
        assume(not (z <= 0 and abs(z - round(z)) < 1e-3))
    assert gamma_ratio(x, g) * gamma_ratio(x, -g) == pytest.approx(1.0, rel=1e-12)


@given(st.floats(0.5, 50), st.floats(0.01, 1.99))
def test_recurrence(x, g):
    for z in (x - g, x + 1 - g):
        assume(not (z <= 0 and abs(z - round(z)) < 1e-3))
    ratio = gamma_ratio(x + 1, g) / gamma_ratio(x, g)
    assert ratio == pytest.approx((x + g) / (x - g), rel=1e-12)


@given(st.integers(1, 3), st.floats(0.01, 40))
def test_falling_factorial_identity(k, shift):
    x = k + shift
    assert gamma_ratio(x, k) == pytest.approx(falling_product(x, k), rel=1e-12)


def test_vectorised_ratio_matches_scalar():
    xs = [2.2, 3.0, 10.5, 200.0]
    for g in (0.3, 1.0, 1.7):
        vec = gamma_ratio_array(xs, g)
        for x, v in zip(xs, vec):
            assert v == pytest.approx(gamma_ratio(x, g), rel=1e-13)


@pytest.mark.parametrize("g, expected", [(0.5, -1.0), (1.5, 3.0)])
def test_d_gamma_examples(g, expected):
    assert d_gamma(g) == pytest.approx(expected, rel=1e-13)


def test_d_gamma_quarter_matches_log_gamma_oracle():
    mag = math.exp(0.5 * math.log(2) + float(mp.loggamma(0.25)) - float(mp.log(abs(mp.gamma(-0.25)))))
    assert d_gamma(0.25) == pytest.approx(-mag, rel=1e-13)


@pytest.mark.parametrize("g", [0.0, 1.0, 2.0])
def test_d_gamma_poles(g):
    with pytest.raises(PoleError):
        d_gamma(g)


@given(st.floats(0.001, 1.999))
def test_d_gamma_sign_table(g):
    assume(abs(g - 1) > 1e-6)
    c = renorm_constant(g)
    assert (c.d_gamma < 0) == (g < 1)
    assert c.energy_factor > 0
