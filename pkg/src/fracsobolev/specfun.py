"""Gamma-function ratios and renormalisation constants.

Every spectral multiplier and sharp constant in the package reduces to a
ratio ``Gamma(x + g) / Gamma(x - g)``.  The helpers here evaluate those
ratios stably in double precision, including the sign when one argument is
negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "PoleError",
    "GammaRatio",
    "RenormConstant",
    "log_gamma",
    "gamma_ratio",
    "d_gamma",
    "renorm_constant",
    "falling_product",
    "gamma_ratio_array",
]

POLE_TOL = 1e-12


class PoleError(ArithmeticError):
    """A Gamma argument sits on (or within ``POLE_TOL`` of) a pole."""


@dataclass(frozen=True)
class GammaRatio:
    x: float
    gamma: float
    value: float


@dataclass(frozen=True)
class RenormConstant:
    gamma: float
    d_gamma: float

    @property
    def energy_factor(self) -> float:
        """Positive prefactor of the extension energy for this order.

        ``-d/(2g)`` for ``g`` in (0, 1) and ``d/(8g(g-1))`` for ``g`` in (1, 2).
        """
        g = self.gamma
        if g < 1:
            return -self.d_gamma / (2 * g)
        return self.d_gamma / (8 * g * (g - 1))


def _near_pole(z: float) -> bool:
    k = round(z)
    return k <= 0 and abs(z - k) < POLE_TOL


def log_gamma(x: float) -> float:
    """Return ``ln Gamma(x)`` for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return float(special.gammaln(x))


def gamma_ratio(x: float, gamma: float) -> float:
    """Return ``Gamma(x + gamma) / Gamma(x - gamma)``.

    Positive arguments go through the Pochhammer symbol, which keeps full
    relative precision for large ``x``.  Otherwise the ratio is assembled from
    ``log|Gamma|`` and the Gamma sign, i.e. the reflection formula.

    Raises
    ------
    PoleError
        If either ``x + gamma`` or ``x - gamma`` is a nonpositive integer.
    """
    a, b = x + gamma, x - gamma
    if _near_pole(a) or _near_pole(b):
        raise PoleError(f"Gamma pole in ratio at x={x!r}, gamma={gamma!r}")
    if gamma == 0:
        return 1.0
    if a > 0 and b > 0:
        return float(special.poch(b, 2 * gamma))
    sign = special.gammasgn(a) * special.gammasgn(b)
    return float(sign * math.exp(special.gammaln(a) - special.gammaln(b)))


def falling_product(x: float, k: int) -> float:
    """``prod_{j=1}^{2k} (x - k + 2k - j)``, the integer-order ratio."""
    out = 1.0
    for j in range(1, 2 * k + 1):
        out *= x - k + 2 * k - j
    return out


def d_gamma(gamma: float) -> float:
    """Renormalisation constant ``2^(2g) Gamma(g) / Gamma(-g)``."""
    # integer orders: Gamma(g) or Gamma(-g) is singular; excluded wholesale
    if abs(gamma - round(gamma)) < POLE_TOL:
        raise PoleError(f"d_gamma is undefined at integer gamma={gamma!r}")
    sign = special.gammasgn(gamma) * special.gammasgn(-gamma)
    logmag = 2 * gamma * math.log(2.0) + special.gammaln(gamma) - special.gammaln(-gamma)
    return float(sign * math.exp(logmag))


def renorm_constant(gamma: float) -> RenormConstant:
    return RenormConstant(gamma=gamma, d_gamma=d_gamma(gamma))


def gamma_ratio_array(x, gamma: float) -> np.ndarray:
    """Vectorised ``gamma_ratio`` for positive arguments (spectral tables)."""
    x = np.asarray(x, dtype=float)
    b = x - gamma
    if np.any(b <= 0):
        raise PoleError("gamma_ratio_array needs x - gamma > 0 everywhere")
    if gamma == 0:
        return np.ones_like(x)
    return special.poch(b, 2 * gamma)
