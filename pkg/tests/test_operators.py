import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracsobolev.operators import (
    OrderError, apply_operator, multiplier_P2gamma, paneitz_energy_multiplier, quadratic_form,
    sharp_constants, spectral_multiplier,
)
from fracsobolev.spectral import random_coefficients, sphere_area


def test_half_order_constant_mode_on_s2():
    assert multiplier_P2gamma(2, 0.5, 0) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_conformal_laplacian(n):
    for l in range(0, 129, 7):
        assert multiplier_P2gamma(n, 1.0, l) == pytest.approx(l * (l + n - 1) + n * (n - 2) / 4,
                                                            rel=1e-13, abs=1e-13)


def test_paneitz_on_s4():
    for l in range(30):
        assert multiplier_P2gamma(4, 2.0, l) == pytest.approx(l * (l + 1) * (l + 2) * (l + 3), abs=1e-9)
        assert paneitz_energy_multiplier(l) == l * (l + 1) * (l + 2) * (l + 3)


def test_critical_order_kernel_contains_constants():
    assert spectral_multiplier(2, 1.0, 3).eigenvalues[0] == 0.0


@pytest.mark.parametrize("n, g", [(2, 1.2), (4, 2.5), (2, 0.0), (3, -0.1)])
def test_order_out_of_range(n, g):
    with pytest.raises(OrderError):
        multiplier_P2gamma(n, g, 1)


@pytest.mark.parametrize("n, g", [(2, 1.0), (4, 2.0)])
def test_sharp_constants_need_subcritical_order(n, g):
    with pytest.raises(OrderError):
        sharp_constants(n, g)


@given(st.sampled_from([2, 3, 4]), st.floats(0.05, 0.95))
def test_multiplier_increases_with_degree(n, frac):
    m = spectral_multiplier(n, frac * n / 2, 40)
    assert np.all(np.diff(m.eigenvalues) > 0)
    assert np.all(m.eigenvalues > 0)


@given(st.sampled_from([2, 4]), st.floats(0.02, 0.98))
def test_sharp_constant_identity(n, frac):
    g = frac * n / 2
    c = sharp_constants(n, g)
    assert c.Y == pytest.approx((n - 2 * g) / 2 * c.Q * sphere_area(n) ** (2 * g / n), rel=1e-12)
    assert c.exponent == pytest.approx(2 * n / (n - 2 * g))


def test_q_curvature_is_normalised_constant_action():
    for n, g in [(2, 0.3), (4, 1.5)]:
        c = sharp_constants(n, g)
        assert c.Q == pytest.approx(2 / (n - 2 * g) * multiplier_P2gamma(n, g, 0), rel=1e-14)


def test_quadratic_form_symmetric_and_diagonal(rng):
    a = random_coefficients(2, 6, rng)
    b = random_coefficients(2, 4, rng)
    m = spectral_multiplier(2, 0.7, 6)
    assert quadratic_form(a, b, m) == pytest.approx(quadratic_form(b, a, m), rel=1e-13)
    assert quadratic_form(a, a, m) == pytest.approx(apply_operator(a, m).dot(a), rel=1e-13)


def test_apply_operator_checks_dimension_and_band(rng):
    with pytest.raises(ValueError):
        apply_operator(random_coefficients(2, 3, rng), spectral_multiplier(4, 1.0, 3))
    with pytest.raises(ValueError):
        apply_operator(random_coefficients(2, 5, rng), spectral_multiplier(2, 0.5, 3))


def test_near_paneitz_limit():
    for l in range(65):
        exact = paneitz_energy_multiplier(l)
        assert abs(multiplier_P2gamma(4, 2 - 1e-6, l) - exact) <= 1e-4 * max(1.0, exact)
    assert math.isfinite(multiplier_P2gamma(4, 2 - 1e-6, 0))
