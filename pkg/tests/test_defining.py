import math

import mpmath as mp
import numpy as np
import pytest

from fracsobolev.defining import (
    boundary_expansion_fit, boundary_limits, closed_form_definers, ode_residual, radial_grid,
    solve_adapted, solve_F, check_radial_bounds,
)


def exact_F(n, s, r):
    """F from the radial eigenfunction of hyperbolic space (n even).

    ``v(t) = ((1/sinh t) d/dt)^(n/2) cosh(g t)`` with ``t = 2 artanh r``.
    """
    g = mp.mpf(s) - mp.mpf(n) / 2

    def v(t):
        f = lambda x: mp.cosh(g * x)  # noqa: E731
        for _ in range(n // 2):
            f = (lambda h: (lambda x: mp.diff(h, x) / mp.sinh(x)))(f)
        return f(t)

    with mp.workdps(40):
        r = mp.mpf(r)
        t = 2 * mp.atanh(r)
        dlog = mp.diff(lambda x: mp.log(v(x)), t)
        return float(dlog * 2 / (1 - r * r) / (n - s) + 2 * r / (1 - r * r))


@pytest.mark.parametrize("n, s", [(2, 1.6), (2, 1.9), (4, 3.2), (4, 3.6)])
def test_matches_closed_form_solution(n, s):
    sol = solve_F(n, s)
    r = np.array([0.05, 0.3, 0.6, 0.9, 0.99, 0.9999])
    F, _ = sol.evaluate(r)
    for ri, Fi in zip(r, F):
        assert Fi == pytest.approx(exact_F(n, s, ri), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("n, s", [(3, 2.3), (4, 3.7)])
def test_ode_residual_small(n, s):
    sol = solve_F(n, s)
    assert np.max(np.abs(ode_residual(sol))) < 1e-6


def test_closed_form_definers():
    d = closed_form_definers(np.array([0.0, 0.5]))
    assert np.allclose(d.rho, [2.0, 2 / 3])
    assert np.allclose(d.rho_L, [1.0, 0.6])
    assert np.allclose(d.rho_0, [0.5, 0.375])
    with pytest.raises(ValueError):
        closed_form_definers([1.0])


def test_radial_grid_monotone():
    r = radial_grid()
    assert np.all(np.diff(r) > 0) and r[-1] == pytest.approx(1 - 1e-6)


@pytest.mark.parametrize("n, s", [(4, 2.5), (4, 4.0), (2, 1.4)])
def test_order_range(n, s):
    with pytest.raises(ValueError):
        solve_F(n, s)


@pytest.mark.parametrize("n, s", [(4, 3.8), (4, 3.6)])
def test_boundary_limits(n, s):
    lim = boundary_limits(solve_adapted(n, s, delta=1e-9))
    assert abs(lim["F"][0] + 1) < 1e-3
    for key in ("T2", "J", "P_rr", "P_tt", "R", "q"):
        assert lim[key][2] < 1e-2, key


@pytest.mark.parametrize("n, s", [(2, 1.7), (3, 2.6), (4, 3.3), (4, 3.8)])
def test_radial_bounds_hold(n, s):
    rep = check_radial_bounds(solve_adapted(n, s))
    assert rep["violations"] == []
    assert rep["sandwich"]["margin"] >= -1e-10


def test_defining_function_sandwich():
    sol = solve_adapted(4, 3.4)
    d = closed_form_definers(sol.r_grid)
    assert np.all(sol.rho_star >= d.rho_0 * (1 - 1e-10))
    assert np.all(sol.rho_star <= d.rho_L * (1 + 1e-10))


def test_expansion_coefficient_carries_normalising_power():
    fit = boundary_expansion_fit(solve_adapted(4, 3.6, delta=1e-9))
    assert not fit.degenerate
    assert fit.rel_err_rho2 < 1e-3
    assert fit.rel_err_rho2gamma_scaled < 1e-3
    assert fit.rel_err_rho2gamma_stated > 0.5


def test_expansion_flags_colliding_exponents():
    fit = boundary_expansion_fit(solve_adapted(4, 3.01))
    assert fit.degenerate


def test_expansion_range():
    with pytest.raises(ValueError):
        boundary_expansion_fit(solve_adapted(2, 1.7))
