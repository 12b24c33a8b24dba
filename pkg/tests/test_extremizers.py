import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracsobolev.extremizers import (
    ConformalFactor, band_limit_for, conformal_weight, fractional_extremizer,
)
from fracsobolev.functionals import (
    onofri_deficit_s2, paneitz_onofri_deficit_s4, quadrature_grid, sobolev_deficit,
)
from fracsobolev.spectral import build_grid, sphere_area


@pytest.mark.parametrize("n, a", [(2, 0.5), (2, [0.3, -0.2, 0.4]), (3, 0.6), (4, 0.3)])
def test_conformal_jacobian_has_full_volume(n, a):
    w = conformal_weight(n, a)
    grid = quadrature_grid(w)
    assert grid.integrate(np.exp(n * w.evaluate(grid))) == pytest.approx(sphere_area(n), rel=1e-12)


def test_conformal_factor_pointwise():
    u = ConformalFactor(2, (0.0, 0.0, 0.5))
    assert u(np.array([0.0, 0.0, 1.0])) == pytest.approx(3.0)
    assert u(np.array([0.0, 0.0, -1.0])) == pytest.approx(1 / 3)


@pytest.mark.parametrize("bad", [(0, 0, 1.0), (0.5, 0.5, 0.8), (0.1, 0.1)])
def test_conformal_factor_rejects(bad):
    with pytest.raises(ValueError):
        ConformalFactor(2, bad)


@pytest.mark.parametrize("t", [0.1, 0.3, 0.5, 0.7])
def test_onofri_vanishes_on_conformal_weights(t):
    assert abs(onofri_deficit_s2(conformal_weight(2, t)).relative) < 1e-10


def test_onofri_off_axis_witness():
    assert abs(onofri_deficit_s2(conformal_weight(2, [0.3, 0.2, -0.1])).relative) < 1e-10


@pytest.mark.parametrize("t", [0.1, 0.3, 0.5])
def test_paneitz_onofri_vanishes_on_conformal_weights(t):
    assert abs(paneitz_onofri_deficit_s4(conformal_weight(4, t)).relative) < 1e-9


@settings(max_examples=15)
@given(st.sampled_from([2, 3, 4]), st.floats(0.05, 0.95), st.floats(0.0, 0.6))
def test_fractional_extremizers_are_equality_cases(n, frac, t):
    g = frac * n / 2
    rep = sobolev_deficit(fractional_extremizer(n, g, t), n, g)
    assert abs(rep.relative) < 1e-10


def test_extremizer_nondegenerate_direction():
    # perturbing an extremizer by a degree-2 harmonic strictly raises the deficit
    from fracsobolev.functionspec import FunctionSpec
    n, g = 2, 0.6
    f = fractional_extremizer(n, g, 0.0)
    c = f.coefficients(2).values.copy()
    c[2] += 0.05
    pert = FunctionSpec.from_coefficients(type(f.coefficients(2))(n, c))
    assert sobolev_deficit(pert, n, g).deficit > 1e-5


def test_band_limit_grows_near_boundary():
    assert band_limit_for(0.5) == 32
    assert band_limit_for(0.9) > band_limit_for(0.5)


def test_extremizer_order_range():
    with pytest.raises(ValueError):
        fractional_extremizer(2, 1.0, 0.2)
