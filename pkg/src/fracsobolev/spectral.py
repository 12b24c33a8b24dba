"""Quadrature grids and harmonic transforms on round spheres.

Conventions
-----------
* ``Delta`` is the positive Laplacian, spectrum ``l(l+n-1)``.
* Bases are orthonormal for the *unnormalised* surface measure, so
  ``sum(c**2) == integral(f**2)``; averages divide by ``sphere_area(n)``.
* On S^2 the full real spherical-harmonic table is supported.  On S^3 and
  S^4 (and optionally S^2) only zonal functions are handled, expanded in
  normalised Gegenbauer polynomials of ``cos(theta)``.

Coefficient layout: zonal tables are ``(L+1,)`` arrays indexed by degree;
full S^2 tables are ``(L+1, 2L+1)`` arrays where entry ``[l, L+m]`` holds the
``cos(m phi)`` coefficient for ``m >= 0`` and the ``sin(|m| phi)`` one for
``m < 0``.  Entries with ``|m| > l`` are zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

__all__ = [
    "BandLimitError",
    "SphereGrid",
    "HarmonicCoefficients",
    "sphere_area",
    "build_grid",
    "analyze",
    "synthesize",
    "synthesize_gradient",
    "laplacian_eigenvalue",
    "zonal_basis",
    "random_coefficients",
]

SUPPORTED_DIMS = (2, 3, 4)
MAX_BAND = 512


class BandLimitError(ValueError):
    """Coefficient degree exceeds what a grid resolves."""


def sphere_area(n: int) -> float:
    """Surface measure of the unit n-sphere, ``2 pi^((n+1)/2) / Gamma((n+1)/2)``."""
    return 2 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def laplacian_eigenvalue(n: int, l: int) -> float:
    """Eigenvalue ``l(l+n-1)`` of the positive Laplacian on degree-l harmonics."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    return float(l * (l + n - 1))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Tensor quadrature grid on S^n.

    ``colat_weights`` already carry ``sin^(n-1)(theta)``.  For zonal grids
    they also carry ``|S^(n-1)|`` so they sum to ``|S^n|``; full S^2 grids
    multiply by ``lon_weight`` per longitude instead.
    """

    n: int
    L: int
    colat_nodes: np.ndarray
    colat_weights: np.ndarray
    lon_nodes: np.ndarray | None = None
    exactness_degree: int = field(default=0)

    @property
    def zonal(self) -> bool:
        return self.lon_nodes is None

    @property
    def lon_weight(self) -> float:
        return 1.0 if self.zonal else 2 * math.pi / len(self.lon_nodes)

    @property
    def shape(self) -> tuple[int, ...]:
        if self.zonal:
            return (len(self.colat_nodes),)
        return (len(self.colat_nodes), len(self.lon_nodes))

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weights broadcast to the sample layout."""
        if self.zonal:
            return self.colat_weights
        return np.outer(self.colat_weights, np.full(len(self.lon_nodes), self.lon_weight))

    def theta(self) -> np.ndarray:
        if self.zonal:
            return self.colat_nodes
        return np.broadcast_to(self.colat_nodes[:, None], self.shape)

    def phi(self) -> np.ndarray:
        if self.zonal:
            raise ValueError("zonal grid has no longitudes")
        return np.broadcast_to(self.lon_nodes[None, :], self.shape)

    def points(self) -> np.ndarray:
        """Cartesian coordinates in R^(n+1), shape ``grid.shape + (n+1,)``.

        Zonal grids return the meridian point with all off-axis mass in the
        first coordinate.
        """
        th = self.theta()
        out = np.zeros(th.shape + (self.n + 1,))
        out[..., -1] = np.cos(th)
        if self.zonal:
            out[..., 0] = np.sin(th)
        else:
            ph = self.phi()
            out[..., 0] = np.sin(th) * np.cos(ph)
            out[..., 1] = np.sin(th) * np.sin(ph)
        return out

    def integrate(self, values) -> float:
        values = np.asarray(values, dtype=float)
        if values.shape != self.shape:
            raise ValueError(f"samples of shape {values.shape} do not match grid {self.shape}")
        return float(np.sum(self.weights * values))

    def mean(self, values) -> float:
        return self.integrate(values) / sphere_area(self.n)


@dataclass(frozen=True, eq=False)
class HarmonicCoefficients:
    n: int
    values: np.ndarray

    @property
    def kind(self) -> str:
        return "zonal" if self.values.ndim == 1 else "full"

    @property
    def L(self) -> int:
        return self.values.shape[0] - 1

    def degrees(self) -> np.ndarray:
        """Degree of every entry, broadcastable against ``values``."""
        l = np.arange(self.L + 1)
        return l if self.kind == "zonal" else l[:, None]

    def scaled(self, per_degree) -> "HarmonicCoefficients":
        """Multiply degree-l entries by ``per_degree[l]``."""
        m = np.asarray(per_degree, dtype=float)
        if m.shape != (self.L + 1,):
            raise ValueError("need one multiplier per degree")
        mult = m if self.kind == "zonal" else m[:, None]
        return HarmonicCoefficients(self.n, self.values * mult)

    def weighted_sum_sq(self, per_degree=None) -> float:
        """``sum_l w_l * sum_m c_lm^2``; Parseval norm when ``per_degree`` is None."""
        sq = self.values**2
        if self.kind == "full":
            sq = sq.sum(axis=1)
        if per_degree is None:
            return float(sq.sum())
        return float(np.dot(np.asarray(per_degree, dtype=float), sq))

    def truncate(self, L: int) -> "HarmonicCoefficients":
        if L >= self.L:
            return self
        if self.kind == "zonal":
            return HarmonicCoefficients(self.n, self.values[: L + 1].copy())
        mid = self.L
        return HarmonicCoefficients(self.n, self.values[: L + 1, mid - L : mid + L + 1].copy())

    def pad(self, L: int) -> "HarmonicCoefficients":
        if L <= self.L:
            return self
        if self.kind == "zonal":
            out = np.zeros(L + 1)
            out[: self.L + 1] = self.values
        else:
            out = np.zeros((L + 1, 2 * L + 1))
            out[: self.L + 1, L - self.L : L + self.L + 1] = self.values
        return HarmonicCoefficients(self.n, out)

    def dot(self, other: "HarmonicCoefficients") -> float:
        L = max(self.L, other.L)
        return float(np.sum(self.pad(L).values * other.pad(L).values))


def build_grid(n: int, L: int, zonal: bool | None = None) -> SphereGrid:
    """Gauss-Jacobi colatitude rule with ``L+1`` nodes (exact to degree 2L+1).

    Full S^2 grids add ``2L+2`` equispaced longitudes.  ``zonal`` defaults to
    False on S^2 and is forced True on S^3, S^4.
    """
    if n not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension n={n}; expected one of {SUPPORTED_DIMS}")
    if not 1 <= L <= MAX_BAND:
        raise ValueError(f"band limit must lie in [1, {MAX_BAND}], got {L}")
    if zonal is None:
        zonal = n != 2
    if not zonal and n != 2:
        raise ValueError("full (non-zonal) transforms are only available on S^2")
    a = (n - 2) / 2
    x, w = special.roots_jacobi(L + 1, a, a)
    # ascending theta
    order = np.argsort(-x)
    x, w = x[order], w[order]
    theta = np.arccos(x)
    if zonal:
        w = w * sphere_area(n - 1)
        lon = None
    else:
        nphi = 2 * L + 2
        lon = 2 * np.pi * np.arange(nphi) / nphi
    return SphereGrid(n=n, L=L, colat_nodes=theta, colat_weights=w, lon_nodes=lon,
                      exactness_degree=2 * L + 1)


# --- zonal basis ---------------------------------------------------------

def _gegenbauer_recurrence(n: int, L: int, x: np.ndarray):
    """Orthonormal polynomials for weight (1-x^2)^((n-2)/2) and derivatives."""
    lam = (n - 1) / 2
    mass = math.sqrt(math.pi) * math.gamma(lam + 0.5) / math.gamma(lam + 1)
    p = np.zeros((L + 1,) + x.shape)
    dp = np.zeros_like(p)
    p[0] = 1 / math.sqrt(mass)

    def b(l):
        return 0.5 * math.sqrt(l * (l + 2 * lam - 1) / ((l + lam) * (l + lam - 1)))

    if L >= 1:
        p[1] = x * p[0] / b(1)
        dp[1] = p[0] / b(1)
    for l in range(1, L):
        bl1, bl = b(l + 1), b(l)
        p[l + 1] = (x * p[l] - bl * p[l - 1]) / bl1
        dp[l + 1] = (x * dp[l] + p[l] - bl * dp[l - 1]) / bl1
    return p, dp


def zonal_basis(n: int, L: int, theta, derivative: bool = False):
    """Orthonormal zonal harmonics ``Z_l(theta)``, shape ``(L+1,) + theta.shape``.

    With ``derivative=True`` also returns ``dZ_l/dtheta``.
    """
    theta = np.asarray(theta, dtype=float)
    x = np.cos(theta)
    p, dp = _gegenbauer_recurrence(n, L, x)
    scale = 1 / math.sqrt(sphere_area(n - 1))
    if not derivative:
        return p * scale
    return p * scale, -np.sin(theta) * dp * scale


# --- associated Legendre functions on S^2 ---------------------------------

def _legendre_m(m: int, L: int, x: np.ndarray, sin_t: np.ndarray, pmm: np.ndarray):
    """Rows ``l = m..L`` of the normalised P_l^m together with d/dtheta."""
    out = np.zeros((L - m + 1,) + x.shape)
    out[0] = pmm
    if L > m:
        out[1] = math.sqrt(2 * m + 3) * x * pmm
    for j in range(2, L - m + 1):
        l = m + j
        a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
        a_prev = math.sqrt((4 * (l - 1) ** 2 - 1) / ((l - 1) ** 2 - m * m))
        out[j] = a * (x * out[j - 1] - out[j - 2] / a_prev)
    d = np.zeros_like(out)
    for j in range(L - m + 1):
        l = m + j
        prev = out[j - 1] if j > 0 else 0.0
        coef = math.sqrt((2 * l + 1) * (l * l - m * m) / (2 * l - 1)) if l > m else 0.0
        d[j] = (l * x * out[j] - coef * prev) / sin_t
    return out, d


def _legendre_sweep(L: int, theta: np.ndarray):
    """Yield ``(m, P[l=m..L], dP/dtheta)`` with P normalised on [-1, 1]."""
    x = np.cos(theta)
    s = np.sin(theta)
    pmm = np.full_like(x, 1 / math.sqrt(2))
    for m in range(L + 1):
        if m > 0:
            pmm = math.sqrt((2 * m + 1) / (2 * m)) * s * pmm
        p, dp = _legendre_m(m, L, x, s, pmm)
        yield m, p, dp


def _lon_norm(m: int) -> float:
    return 1 / math.sqrt(2 * math.pi) if m == 0 else 1 / math.sqrt(math.pi)


# --- transforms ----------------------------------------------------------

def analyze(samples, grid: SphereGrid, L: int | None = None) -> HarmonicCoefficients:
    """Project grid samples onto the orthonormal basis up to degree ``L``."""
    f = np.asarray(samples, dtype=float)
    if f.shape != grid.shape:
        raise ValueError(f"samples of shape {f.shape} do not match grid {grid.shape}")
    L = grid.L if L is None else L
    if L > grid.L:
        raise BandLimitError(f"cannot analyze to L={L} on a grid resolving L={grid.L}")
    if grid.zonal:
        Z = zonal_basis(grid.n, L, grid.colat_nodes)
        return HarmonicCoefficients(grid.n, Z @ (grid.colat_weights * f))
    phi = grid.lon_nodes
    out = np.zeros((L + 1, 2 * L + 1))
    for m, p, _ in _legendre_sweep(L, grid.colat_nodes):
        wp = p * grid.colat_weights
        nm = _lon_norm(m) * grid.lon_weight
        out[m:, L + m] = wp @ (f @ np.cos(m * phi)) * nm
        if m > 0:
            out[m:, L - m] = wp @ (f @ np.sin(m * phi)) * nm
    return HarmonicCoefficients(grid.n, out)


def _check_band(c: HarmonicCoefficients, grid: SphereGrid):
    if c.n != grid.n:
        raise ValueError(f"dimension mismatch: coefficients on S^{c.n}, grid on S^{grid.n}")
    if c.L > grid.L:
        raise BandLimitError(f"coefficients reach L={c.L} but grid resolves L={grid.L}")


def synthesize(c: HarmonicCoefficients, grid: SphereGrid) -> np.ndarray:
    """Evaluate an expansion at the grid nodes."""
    _check_band(c, grid)
    if c.kind == "zonal":
        if grid.zonal:
            return c.values @ zonal_basis(grid.n, c.L, grid.colat_nodes)
        prof = c.values @ zonal_basis(grid.n, c.L, grid.colat_nodes)
        return np.repeat(prof[:, None], len(grid.lon_nodes), axis=1)
    if grid.zonal:
        raise ValueError("full S^2 coefficients need a grid with longitudes")
    L = c.L
    phi = grid.lon_nodes
    out = np.zeros(grid.shape)
    for m, p, _ in _legendre_sweep(L, grid.colat_nodes):
        nm = _lon_norm(m)
        out += np.outer(c.values[m:, L + m] @ p, np.cos(m * phi) * nm)
        if m > 0:
            out += np.outer(c.values[m:, L - m] @ p, np.sin(m * phi) * nm)
    return out


def synthesize_gradient(c: HarmonicCoefficients, grid: SphereGrid):
    """Return ``(d_theta f, (1/sin theta) d_phi f)`` on the grid.

    For zonal input the second component is identically zero.
    """
    _check_band(c, grid)
    if c.kind == "zonal":
        _, dZ = zonal_basis(grid.n, c.L, grid.colat_nodes, derivative=True)
        dth = c.values @ dZ
        if grid.zonal:
            return dth, np.zeros_like(dth)
        dth = np.repeat(dth[:, None], len(grid.lon_nodes), axis=1)
        return dth, np.zeros_like(dth)
    if grid.zonal:
        raise ValueError("full S^2 coefficients need a grid with longitudes")
    L = c.L
    phi = grid.lon_nodes
    s = np.sin(grid.colat_nodes)
    dth = np.zeros(grid.shape)
    dph = np.zeros(grid.shape)
    for m, p, dp in _legendre_sweep(L, grid.colat_nodes):
        nm = _lon_norm(m)
        cc = c.values[m:, L + m]
        dth += np.outer(cc @ dp, np.cos(m * phi) * nm)
        if m > 0:
            cs = c.values[m:, L - m]
            dth += np.outer(cs @ dp, np.sin(m * phi) * nm)
            dph += np.outer((cc @ p) / s, -m * np.sin(m * phi) * nm)
            dph += np.outer((cs @ p) / s, m * np.cos(m * phi) * nm)
    return dth, dph


def random_coefficients(n: int, L: int, rng: np.random.Generator, kind: str | None = None,
                        decay: float = 1.0) -> HarmonicCoefficients:
    """Gaussian coefficients with per-degree scale ``(1+l)^-decay``."""
    kind = kind or ("full" if n == 2 else "zonal")
    scale = (1.0 + np.arange(L + 1)) ** (-decay)
    if kind == "zonal":
        return HarmonicCoefficients(n, rng.standard_normal(L + 1) * scale)
    if n != 2:
        raise ValueError("full tables exist only on S^2")
    vals = rng.standard_normal((L + 1, 2 * L + 1)) * scale[:, None]
    l = np.arange(L + 1)[:, None]
    m = np.arange(-L, L + 1)[None, :]
    vals[np.abs(m) > l] = 0.0
    return HarmonicCoefficients(n, vals)
