"""Deficit functionals of the sharp inequalities and the continuation quantities.

Deficits are oriented as ``rhs - lhs`` of each inequality as usually printed,
so a sharp inequality means ``deficit >= 0`` with equality on extremizers.
Quadratic energies are computed in coefficient space; exponentials and
``|f|^q`` are integrated by quadrature on an oversampled grid, since they are
not band-limited.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .functionspec import FunctionSpec
from .operators import paneitz_energy_multiplier, sharp_constants, spectral_multiplier
from .spectral import SphereGrid, build_grid, laplacian_eigenvalue, sphere_area
from .specfun import PoleError

__all__ = [
    "DeficitReport",
    "quadrature_grid",
    "sobolev_deficit",
    "classical_sobolev_deficit",
    "onofri_deficit_s2",
    "paneitz_onofri_deficit_s4",
    "branson_rewrite_gap",
    "A0",
    "A1",
    "onofri_limit_target",
    "paneitz_limit_target",
    "gradient_energy",
    "paneitz_energy",
]

MIN_QUAD_BAND = 32


@dataclass(frozen=True)
class DeficitReport:
    name: str
    n: int
    gamma: float | None
    lhs: float
    rhs: float
    deficit: float
    scale: float = 1.0
    input: FunctionSpec | None = None

    @property
    def relative(self) -> float:
        """Deficit divided by ``scale`` (the energy or the largest term)."""
        return self.deficit / self.scale if self.scale else self.deficit

    def row(self) -> dict:
        return {"name": self.name, "n": self.n, "gamma": self.gamma,
                "lhs": self.lhs, "rhs": self.rhs, "deficit": self.deficit}

    def to_json(self) -> str:
        doc = {k: v for k, v in asdict(self).items() if k != "input"}
        if self.input is not None:
            doc["input"] = json.loads(self.input.to_json())
        return json.dumps(doc)


def quadrature_grid(spec: FunctionSpec, band: int | None = None) -> SphereGrid:
    """Oversampled grid (band ``4L``, at least 32) for nonlinear integrands."""
    if band is None:
        band = max(4 * spec.band_limit, MIN_QUAD_BAND)
    band = min(band, 512)
    return build_grid(spec.n, band, zonal=spec.zonal or spec.n != 2)


def _coeff_band(spec: FunctionSpec, L: int | None) -> int:
    return spec.band_limit if L is None else L


def gradient_energy(omega: FunctionSpec, L: int | None = None) -> float:
    """``integral |grad omega|^2`` from the coefficients."""
    c = omega.coefficients(_coeff_band(omega, L))
    lam = [laplacian_eigenvalue(omega.n, l) for l in range(c.L + 1)]
    return c.weighted_sum_sq(lam)


def paneitz_energy(omega: FunctionSpec, L: int | None = None) -> float:
    """``integral |Delta omega|^2 + 2 |grad omega|^2`` on S^4."""
    if omega.n != 4:
        raise ValueError("Paneitz energy is defined here on S^4 only")
    c = omega.coefficients(_coeff_band(omega, L))
    return c.weighted_sum_sq([paneitz_energy_multiplier(l) for l in range(c.L + 1)])


def sobolev_deficit(f: FunctionSpec, n: int, gamma: float, L: int | None = None,
                    quad_band: int | None = None) -> DeficitReport:
    """``integral f P f - Y (integral |f|^q)^(2/q)`` for the order-``2 gamma`` operator."""
    if f.n != n:
        raise ValueError(f"function lives on S^{f.n}, not S^{n}")
    const = sharp_constants(n, gamma)
    c = f.coefficients(_coeff_band(f, L))
    mult = spectral_multiplier(n, gamma, c.L)
    energy = c.weighted_sum_sq(mult.eigenvalues)
    grid = quadrature_grid(f, quad_band)
    q = const.exponent
    norm = grid.integrate(np.abs(f.evaluate(grid)) ** q) ** (2 / q)
    if energy == 0 and norm == 0:
        raise ValueError("sobolev_deficit of the zero function is undefined")
    lhs = const.Y * norm
    return DeficitReport("sobolev", n, gamma, lhs, energy, energy - lhs, scale=energy, input=f)


def classical_sobolev_deficit(f: FunctionSpec, L: int | None = None,
                              quad_band: int | None = None) -> DeficitReport:
    """Averaged second-order inequality on S^n, n >= 3.

    ``avg|grad f|^2 + c_n avg f^2 - c_n (avg |f|^(2n/(n-2)))^((n-2)/n)`` with
    ``c_n = n(n-2)/4``; the gradient term is spectral.
    """
    n = f.n
    if n < 3:
        raise ValueError("classical Sobolev inequality needs n >= 3")
    cn = n * (n - 2) / 4
    area = sphere_area(n)
    c = f.coefficients(_coeff_band(f, L))
    lam = [laplacian_eigenvalue(n, l) for l in range(c.L + 1)]
    rhs = (c.weighted_sum_sq(lam) + cn * c.weighted_sum_sq()) / area
    grid = quadrature_grid(f, quad_band)
    p = 2 * n / (n - 2)
    lhs = cn * grid.mean(np.abs(f.evaluate(grid)) ** p) ** ((n - 2) / n)
    return DeficitReport("classical-sobolev", n, 1.0, lhs, rhs, rhs - lhs, scale=rhs, input=f)


def onofri_deficit_s2(omega: FunctionSpec, L: int | None = None,
                      quad_band: int | None = None) -> DeficitReport:
    """``avg|grad w|^2 + 2 avg w - ln avg e^(2w)`` on S^2."""
    if omega.n != 2:
        raise ValueError("Onofri deficit is defined on S^2")
    area = 4 * math.pi
    grad = gradient_energy(omega, L) / area
    grid = quadrature_grid(omega, quad_band)
    w = omega.evaluate(grid)
    mean_w = grid.mean(w)
    lhs = math.log(grid.mean(np.exp(2 * w)))
    rhs = grad + 2 * mean_w
    return DeficitReport("onofri", 2, None, lhs, rhs, rhs - lhs,
                         scale=max(1.0, abs(lhs), grad), input=omega)


def paneitz_onofri_deficit_s4(omega: FunctionSpec, L: int | None = None,
                              quad_band: int | None = None) -> DeficitReport:
    """``avg(|Delta w|^2 + 2|grad w|^2) + 12 avg w - 3 ln avg e^(4w)`` on S^4."""
    if omega.n != 4 or not omega.zonal:
        raise ValueError("Paneitz-Onofri deficit needs a zonal function on S^4")
    area = sphere_area(4)
    energy = paneitz_energy(omega, L) / area
    grid = quadrature_grid(omega, quad_band)
    w = omega.evaluate(grid)
    lhs = 3 * math.log(grid.mean(np.exp(4 * w)))
    rhs = energy + 3 * grid.mean(4 * w)
    return DeficitReport("paneitz-onofri", 4, None, lhs, rhs, rhs - lhs,
                         scale=max(1.0, abs(lhs), energy), input=omega)


def branson_rewrite_gap(omega: FunctionSpec, n: int | None = None,
                        quad_band: int | None = None) -> DeficitReport:
    """Gap in the exponential rewrite of the classical Sobolev inequality.

    ``avg e^((n-2)w)|grad w|^2 - n/(n-2) [ (avg e^(nw))^((n-2)/n) - 1
    - avg(e^((n-2)w) - 1) ]``; the gradient is evaluated pointwise.
    """
    n = omega.n if n is None else n
    if n not in (3, 4) or omega.n != n or not omega.zonal:
        raise ValueError("rewrite gap needs a zonal function on S^3 or S^4")
    grid = quadrature_grid(omega, quad_band)
    w, grad_sq, _ = omega.derivatives(grid)
    rhs = grid.mean(np.exp((n - 2) * w) * grad_sq)
    bracket = (math.expm1((n - 2) / n * math.log(grid.mean(np.exp(n * w))))
               - grid.mean(np.expm1((n - 2) * w)))
    lhs = n / (n - 2) * bracket
    return DeficitReport("branson-rewrite", n, None, lhs, rhs, rhs - lhs,
                         scale=max(abs(rhs), abs(lhs)) or 1.0, input=omega)


def _samples(omega: FunctionSpec, quad_band: int | None):
    grid = quadrature_grid(omega, quad_band)
    return grid, omega.evaluate(grid)


def A0(gamma: float, omega: FunctionSpec, quad_band: int | None = None) -> float:
    """Left-hand continuation quantity on S^2, divided by ``(1-gamma)^2``.

    ``Gamma(1+g)/Gamma(2-g)/(1-g) [ (4pi)^g (int e^(2w))^(1-g) - int e^(2(1-g)w) ]``,
    evaluated in the cancellation-free form
    ``4pi expm1((1-g) ln avg e^(2w)) - int expm1(2(1-g) w)``.
    """
    if omega.n != 2:
        raise ValueError("A0 lives on S^2")
    if not 0 < gamma < 1:
        if abs(gamma - 1) < 1e-15:
            raise PoleError("A0 has a removable pole at gamma = 1; use onofri_limit_target")
        raise ValueError("A0 needs gamma in (0, 1)")
    eps = 1 - gamma
    grid, w = _samples(omega, quad_band)
    area = 4 * math.pi
    bracket = area * math.expm1(eps * math.log(grid.mean(np.exp(2 * w)))) \
        - grid.integrate(np.expm1(2 * eps * w))
    pref = math.gamma(1 + gamma) / math.gamma(2 - gamma)
    return pref * bracket / eps


def A1(gamma: float, omega: FunctionSpec, quad_band: int | None = None) -> float:
    """Left-hand continuation quantity on S^4, divided by ``(2-gamma)^2``.

    ``Gamma(2+g)/(2 Gamma(3-g)) * 2/(2-g) * [ |S^4|^(g/2) (int e^(4w))^((2-g)/2)
    - int e^(2(2-g)w) ]``.
    """
    if omega.n != 4 or not omega.zonal:
        raise ValueError("A1 needs a zonal function on S^4")
    if not 1 < gamma < 2:
        if abs(gamma - 2) < 1e-15:
            raise PoleError("A1 has a removable pole at gamma = 2; use paneitz_limit_target")
        raise ValueError("A1 needs gamma in (1, 2)")
    eps = 2 - gamma
    grid, w = _samples(omega, quad_band)
    area = sphere_area(4)
    bracket = area * math.expm1(eps / 2 * math.log(grid.mean(np.exp(4 * w)))) \
        - grid.integrate(np.expm1(2 * eps * w))
    pref = math.gamma(2 + gamma) / (2 * math.gamma(3 - gamma)) * 2
    return pref * bracket / eps


def onofri_limit_target(omega: FunctionSpec, quad_band: int | None = None) -> float:
    """``4 pi ln( avg e^(2 (w - mean w)) )`` on S^2."""
    if omega.n != 2:
        raise ValueError("target defined on S^2")
    grid = quadrature_grid(omega, quad_band)
    w = omega.evaluate(grid)
    return 4 * math.pi * math.log(grid.mean(np.exp(2 * (w - grid.mean(w)))))


def paneitz_limit_target(omega: FunctionSpec, quad_band: int | None = None) -> float:
    """``3 |S^4| ln( avg e^(4 (w - mean w)) )`` on S^4."""
    if omega.n != 4:
        raise ValueError("target defined on S^4")
    grid = quadrature_grid(omega, quad_band)
    w = omega.evaluate(grid)
    return 3 * sphere_area(4) * math.log(grid.mean(np.exp(4 * (w - grid.mean(w)))))
