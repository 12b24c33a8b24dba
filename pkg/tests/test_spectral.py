import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracsobolev.spectral import (
    BandLimitError, HarmonicCoefficients, analyze, build_grid, laplacian_eigenvalue,
    random_coefficients, sphere_area, synthesize, synthesize_gradient, zonal_basis,
)

CASES = [(2, False), (2, True), (3, True), (4, True)]


@pytest.mark.parametrize("n, expected", [(2, 4 * math.pi), (3, 2 * math.pi**2), (4, 8 * math.pi**2 / 3)])
def test_sphere_area(n, expected):
    assert sphere_area(n) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n, zonal", CASES)
def test_grid_integrates_polynomials_exactly(n, zonal):
    grid = build_grid(n, 6, zonal=zonal)
    x = np.cos(grid.theta())
    # int_{S^n} cos^(2k) = |S^(n-1)| int_0^pi cos^(2k) sin^(n-1)
    for k in range(7):
        exact = sphere_area(n - 1) * float(mp.quad(lambda t: mp.cos(t) ** (2 * k) * mp.sin(t) ** (n - 1),
                                                   [0, mp.pi]))
        assert grid.integrate(x ** (2 * k)) == pytest.approx(exact, rel=1e-13)


@pytest.mark.parametrize("c", [0.1, 0.45, 1.3])
def test_mean_of_exponential_on_s2(c):
    grid = build_grid(2, 48)
    assert grid.mean(np.exp(2 * c * np.cos(grid.theta()))) == pytest.approx(
        math.sinh(2 * c) / (2 * c), rel=1e-13)


@pytest.mark.parametrize("n, zonal", CASES)
def test_roundtrip_and_parseval(n, zonal, rng):
    L = 12
    kind = "zonal" if zonal else "full"
    c = random_coefficients(n, L, rng, kind=kind)
    grid = build_grid(n, L, zonal=zonal)
    f = synthesize(c, grid)
    back = analyze(f, grid, L)
    assert np.max(np.abs(back.values - c.values)) < 1e-12
    assert grid.integrate(f**2) == pytest.approx(c.weighted_sum_sq(), rel=1e-12)


def test_gradient_energy_of_cos_on_s2():
    grid = build_grid(2, 4)
    c = analyze(np.cos(grid.theta()), grid)
    dth, dph = synthesize_gradient(c, grid)
    assert grid.integrate(dth**2 + dph**2) == pytest.approx(8 * math.pi / 3, rel=1e-13)


@pytest.mark.parametrize("n, zonal", CASES)
def test_gradient_matches_spectral_dirichlet_form(n, zonal, rng):
    L = 10
    c = random_coefficients(n, L, rng, kind="zonal" if zonal else "full")
    grid = build_grid(n, L + 2, zonal=zonal)
    dth, dph = synthesize_gradient(c, grid)
    lam = [laplacian_eigenvalue(n, l) for l in range(L + 1)]
    assert grid.integrate(dth**2 + dph**2) == pytest.approx(c.weighted_sum_sq(lam), rel=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_zonal_basis_orthonormal(n):
    L = 9
    grid = build_grid(n, L + 1, zonal=True)
    Z = zonal_basis(n, L, grid.colat_nodes)
    gram = np.einsum("it,jt,t->ij", Z, Z, grid.colat_weights)
    assert np.max(np.abs(gram - np.eye(L + 1))) < 1e-13


def test_zonal_basis_derivative_against_finite_difference():
    th = np.linspace(0.2, 2.9, 7)
    _, dZ = zonal_basis(4, 6, th, derivative=True)
    h = 1e-6
    fd = (zonal_basis(4, 6, th + h) - zonal_basis(4, 6, th - h)) / (2 * h)
    assert np.max(np.abs(dZ - fd)) < 1e-7


def test_synthesis_refuses_unresolved_band(rng):
    c = random_coefficients(2, 10, rng)
    with pytest.raises(BandLimitError):
        synthesize(c, build_grid(2, 6))


def test_zonal_coefficients_on_full_grid(rng):
    c = random_coefficients(2, 5, rng, kind="zonal")
    full = synthesize(c, build_grid(2, 5, zonal=False))
    zon = synthesize(c, build_grid(2, 5, zonal=True))
    assert np.allclose(full, zon[:, None])


@pytest.mark.parametrize("n, L", [(5, 4), (2, 0), (2, 513)])
def test_build_grid_rejects(n, L):
    with pytest.raises(ValueError):
        build_grid(n, L)


def test_full_grid_only_on_s2():
    with pytest.raises(ValueError):
        build_grid(3, 4, zonal=False)


@given(st.integers(0, 8), st.integers(0, 8))
def test_truncate_pad_dot(la, lb):
    a = HarmonicCoefficients(2, np.arange(1, (la + 1) * (2 * la + 1) + 1, dtype=float).reshape(la + 1, -1))
    assert a.pad(la + lb).truncate(la).dot(a) == pytest.approx(a.weighted_sum_sq())
