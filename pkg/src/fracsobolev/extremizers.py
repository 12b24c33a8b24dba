"""Moebius conformal factors: equality cases of the sharp inequalities.

For ``a`` in the open unit ball of R^(n+1),

    u_a(x) = (1 - |a|^2) / |x - a|^2,    x in S^n,

is the conformal factor of a Moebius map, so ``u_a^n`` is its Jacobian and
integrates to ``|S^n|``.  ``ln u_a`` saturates the Onofri-type inequalities
and ``u_a^((n - 2 gamma)/2)`` saturates the fractional Sobolev inequality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functionspec import FunctionSpec

__all__ = ["ConformalFactor", "conformal_weight", "fractional_extremizer", "band_limit_for"]


@dataclass(frozen=True)
class ConformalFactor:
    n: int
    a: tuple

    def __post_init__(self):
        if len(self.a) != self.n + 1:
            raise ValueError(f"need a point of R^{self.n + 1}")
        if np.linalg.norm(self.a) >= 1:
            raise ValueError("|a| must be < 1")

    def __call__(self, x) -> np.ndarray:
        """Evaluate at Cartesian points ``x`` of shape ``(..., n+1)``."""
        a = np.asarray(self.a, dtype=float)
        return (1 - a @ a) / np.sum((np.asarray(x) - a) ** 2, axis=-1)


def _as_point(n: int, a) -> list | float:
    if np.isscalar(a):
        if not abs(a) < 1:
            raise ValueError(f"|a| must be < 1, got {a!r}")
        return float(a)
    a = [float(v) for v in a]
    if len(a) != n + 1:
        raise ValueError(f"need a point of R^{n + 1}")
    if np.linalg.norm(a) >= 1:
        raise ValueError("|a| must be < 1")
    if all(v == 0 for v in a[:-1]):
        return a[-1]
    return a


def band_limit_for(a) -> int:
    """Degree needed before quadrature of ``e^(n omega_a)``: at least 16/(1-|a|)."""
    t = float(np.linalg.norm(np.atleast_1d(a)))
    return int(np.ceil(16 / (1 - t)))


def conformal_weight(n: int, a) -> FunctionSpec:
    """``omega_a = ln u_a``; zonal when ``a`` lies on the polar axis.

    ``a`` may be a scalar (the polar-axis coordinate) or a point of R^(n+1).
    """
    return FunctionSpec("conformal-family", n, {"a": _as_point(n, a), "role": "weight"})


def fractional_extremizer(n: int, gamma: float, a) -> FunctionSpec:
    """``f_a = u_a^((n - 2 gamma)/2)``, extremal for the order-``2 gamma`` inequality."""
    if not 0 < gamma < n / 2:
        raise ValueError(f"gamma must lie in (0, {n / 2}), got {gamma!r}")
    return FunctionSpec("conformal-family", n,
                        {"a": _as_point(n, a), "role": "extremizer", "gamma": float(gamma)})
