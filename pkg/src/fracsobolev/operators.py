"""Fractional conformal operators P_{2 gamma} on S^n as spectral multipliers.

On degree-l spherical harmonics ``B = sqrt(Delta + ((n-1)/2)^2)`` acts by
``l + (n-1)/2``, so

    P_{2 gamma} Y_l = Gamma(l + n/2 + gamma) / Gamma(l + n/2 - gamma) Y_l.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import HarmonicCoefficients, laplacian_eigenvalue, sphere_area
from .specfun import POLE_TOL, gamma_ratio, gamma_ratio_array

__all__ = [
    "OrderError",
    "SpectralMultiplier",
    "SharpConstant",
    "multiplier_P2gamma",
    "spectral_multiplier",
    "apply_operator",
    "sharp_constants",
    "paneitz_energy_multiplier",
    "quadratic_form",
]


class OrderError(ValueError):
    """Order gamma outside (0, n/2)."""


def _check_order(n: int, gamma: float, closed: bool = False):
    ok = 0 < gamma <= n / 2 if closed else 0 < gamma < n / 2
    if not ok:
        bracket = "]" if closed else ")"
        raise OrderError(f"order gamma={gamma!r} outside (0, {n / 2}{bracket} for S^{n}")


def _eigenvalue(x: float, gamma: float) -> float:
    b = x - gamma
    if b <= 0 and abs(b - round(b)) < POLE_TOL:
        return 0.0  # 1/Gamma vanishes at its poles
    return gamma_ratio(x, gamma)


@dataclass(frozen=True, eq=False)
class SpectralMultiplier:
    n: int
    gamma: float
    eigenvalues: np.ndarray  # indexed by degree l

    @property
    def L(self) -> int:
        return len(self.eigenvalues) - 1

    def __getitem__(self, l: int) -> float:
        return float(self.eigenvalues[l])


@dataclass(frozen=True)
class SharpConstant:
    n: int
    gamma: float
    Y: float
    Q: float

    @property
    def exponent(self) -> float:
        """Critical Lebesgue exponent ``q = 2n / (n - 2 gamma)``."""
        return 2 * self.n / (self.n - 2 * self.gamma)


def multiplier_P2gamma(n: int, gamma: float, l: int) -> float:
    """Eigenvalue of P_{2 gamma} on degree-l harmonics of S^n.

    The critical order ``gamma = n/2`` is allowed; there the constants are in
    the kernel.
    """
    _check_order(n, gamma, closed=True)
    if l < 0:
        raise ValueError("degree must be nonnegative")
    return _eigenvalue(l + n / 2, gamma)


def spectral_multiplier(n: int, gamma: float, L: int) -> SpectralMultiplier:
    _check_order(n, gamma, closed=True)
    x = np.arange(L + 1) + n / 2
    if x[0] - gamma > 0:
        mu = gamma_ratio_array(x, gamma)
    else:
        mu = [_eigenvalue(v, gamma) for v in x]
    return SpectralMultiplier(n, gamma, np.asarray(mu, dtype=float))


def apply_operator(c: HarmonicCoefficients, m: SpectralMultiplier) -> HarmonicCoefficients:
    """Diagonal action of the multiplier on a coefficient table."""
    if c.n != m.n:
        raise ValueError(f"dimension mismatch: S^{c.n} coefficients, S^{m.n} operator")
    if c.L > m.L:
        raise ValueError(f"multiplier tabulated to L={m.L}, coefficients reach L={c.L}")
    return c.scaled(m.eigenvalues[: c.L + 1])


def quadratic_form(f: HarmonicCoefficients, g: HarmonicCoefficients, m: SpectralMultiplier) -> float:
    """``integral f P g`` computed in coefficient space."""
    L = max(f.L, g.L)
    return f.pad(L).dot(apply_operator(g.pad(L), m))


def sharp_constants(n: int, gamma: float) -> SharpConstant:
    """Sharp Sobolev constant Y and Q-curvature of P_{2 gamma} on S^n."""
    _check_order(n, gamma)
    ratio = gamma_ratio(n / 2, gamma)
    Y = ratio * sphere_area(n) ** (2 * gamma / n)
    Q = 2 / (n - 2 * gamma) * ratio
    return SharpConstant(n, gamma, Y, Q)


def paneitz_energy_multiplier(l: int) -> float:
    """Per-degree weight of ``integral |Delta w|^2 + 2|grad w|^2`` on S^4."""
    lam = laplacian_eigenvalue(4, l)
    return lam * lam + 2 * lam
