"""Ball integrals bounding the continuation quantities, and the gamma sweep.

A boundary function ``omega`` is extended to the ball as
``Omega(r, theta) = chi(r) omega(theta)`` with a smooth cutoff ``chi`` that
vanishes on [0, 1/3] and equals 1 on [2/3, 1].  Plugging ``e^(eps Omega)``
into the extension energy of the fractional Sobolev inequality gives upper
bounds ``B0`` (S^2, order in (0,1)) and ``B1`` (S^4, order in (7/4, 2)) for
the quantities ``A0``, ``A1`` of :mod:`fracsobolev.functionals`.  As the order
approaches ``n/2``, ``A`` tends to a logarithmic limit and ``B`` to the
Dirichlet (S^2) or Paneitz (S^4) energy of ``omega``.

Radial integrals are split at 1/3 and 2/3.  The middle panel is smooth and
uses Gauss-Legendre nodes; on [2/3, 1] the integrand is ``(1-r)^alpha`` times
a smooth factor, so Gauss-Jacobi nodes for that weight integrate it to
spectral accuracy even when ``alpha`` is close to -1.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import expit, roots_jacobi, roots_legendre

from .defining import DefiningFunctionSolution, reconstruct, solve_adapted, solve_F
from .functionals import (
    A0, A1, gradient_energy, onofri_limit_target, paneitz_energy, paneitz_limit_target,
    quadrature_grid,
)
from .functionspec import FunctionSpec

__all__ = [
    "ExtensionProfile",
    "DegenerateFitError",
    "BallIntegral",
    "ContinuationRecord",
    "Extrapolation",
    "cutoff",
    "B0",
    "B0_parts",
    "adapted_ratio",
    "B1",
    "B1_parts",
    "b1_radial_nodes",
    "radial_factor",
    "curvature_combination",
    "sweep",
    "extrapolate_limit",
    "THREADS_ENV",
]

THREADS_ENV = "FRACSOBOLEV_THREADS"


class DegenerateFitError(ValueError):
    """Too few distinct orders for the requested extrapolation."""


N_INNER = 64
N_EDGE = 64
B1_TAIL = 1 - 1e-9


def cutoff(r, derivatives: bool = False):
    """Smooth step: 0 on [0, 1/3], 1 on [2/3, 1].

    Built from ``h(u) = exp(-1/u)`` as ``h(u) / (h(u) + h(1-u))`` with
    ``u = 3r - 1``, which equals ``expit(1/(1-u) - 1/u)``.  With
    ``derivatives`` returns ``(chi, chi', chi'')`` in ``r``.
    """
    r = np.asarray(r, dtype=float)
    u = 3 * r - 1
    inside = (u > 0) & (u < 1)
    chi = np.where(u >= 1, 1.0, 0.0)
    d1 = np.zeros_like(r)
    d2 = np.zeros_like(r)
    ui = u[inside]
    q = 1 / ui - 1 / (1 - ui)
    sig = expit(-q)
    chi[inside] = sig
    if not derivatives:
        return chi
    both = expit(q) * sig
    q1 = -1 / ui**2 - 1 / (1 - ui) ** 2
    q2 = 2 / ui**3 - 2 / (1 - ui) ** 3
    s1 = -both * q1
    s2 = -(1 - 2 * sig) * s1 * q1 - both * q2
    d1[inside] = 3 * s1
    d2[inside] = 9 * s2
    return chi, d1, d2


@dataclass(frozen=True)
class ExtensionProfile:
    """``Omega(r, theta) = chi(r) omega(theta)`` on the unit ball."""

    omega: FunctionSpec

    @staticmethod
    def chi(r, derivatives: bool = False):
        return cutoff(r, derivatives)

    def Omega(self, r, grid) -> np.ndarray:
        """Values on ``radii x grid``, shape ``(len(r),) + grid.shape``."""
        r = np.asarray(r, dtype=float)
        w = self.omega.evaluate(grid)
        return cutoff(r).reshape(r.shape + (1,) * w.ndim) * w


@dataclass(frozen=True)
class BallIntegral:
    """A ball integral split at r = 2/3, with a resolution error estimate."""

    total: float
    inner: float
    outer: float
    error: float
    min_integrand: float = math.nan


def _legendre_panel(n: int, a: float = 1 / 3, b: float = 2 / 3):
    x, w = roots_legendre(n)
    h = (b - a) / 2
    return a + h * (x + 1), h * w


def _jacobi_edge(n: int, alpha: float, a: float = 2 / 3):
    """Nodes/weights on [a, 1] with the weight ``(1-r)^alpha`` divided back out.

    ``sum(W * f(r))`` then integrates ``f`` whenever ``f / (1-r)^alpha`` is
    smooth.
    """
    x, w = roots_jacobi(n, alpha, 0.0)
    h = (1 - a) / 2
    r = a + h * (x + 1)
    return r, w * h ** (alpha + 1) / (1 - r) ** alpha


def _check_b0_gamma(gamma: float):
    if not 0 < gamma < 1:
        raise ValueError(f"B0 needs gamma in (0, 1), got {gamma!r}")


def radial_factor(gamma: float, nodes: int = N_EDGE) -> float:
    """``2(1-gamma) int_{2/3}^1 2 rho_L^(2(1-gamma)) / (1-r^2) dr``; tends to 1."""
    _check_b0_gamma(gamma)
    r, W = _jacobi_edge(nodes, 1 - 2 * gamma)
    rho_L = (1 - r * r) / (1 + r * r)
    return float(2 * (1 - gamma) * np.sum(W * 2 * rho_L ** (2 - 2 * gamma) / (1 - r * r)))


def _b0_prefactor(gamma: float) -> float:
    return math.gamma(gamma) / math.gamma(2 - gamma) * 2 ** (2 * gamma - 1) * (1 - gamma)


def _b0_sum(gamma, profile, r, W, grid, w, grad_sq, weight):
    eps = 1 - gamma
    chi, d1, _ = cutoff(r, derivatives=True)
    rho_L = (1 - r * r) / (1 + r * r)
    radial = 2 * rho_L ** (2 - 2 * gamma) / (1 - r * r)
    if weight is not None:
        radial = radial * weight(r) ** (2 - 2 * gamma)
    shape = (-1,) + (1,) * w.ndim
    chi, d1, radial, rr, W = (v.reshape(shape) for v in (chi, d1, radial, r, W))
    dens = np.exp(2 * eps * chi * w) * (rr**2 * d1**2 * w**2 + chi**2 * grad_sq)
    per_r = np.array([grid.integrate(v) for v in radial * dens])
    return float(np.sum(W.ravel() * per_r))


def B0_parts(gamma: float, profile: ExtensionProfile, n_inner: int = N_INNER,
             n_edge: int = N_EDGE, quad_band: int | None = None,
             weight=None) -> BallIntegral:
    """``B0`` split into the [1/3, 2/3] and [2/3, 1] radial parts.

    ``weight`` is an optional callable ``r -> rho_*/rho_L`` raised to the power
    ``2 - 2 gamma`` inside the integral (the un-relaxed bound).  The error is
    the change when both node counts are halved.
    """
    _check_b0_gamma(gamma)
    omega = profile.omega
    if omega.n != 2:
        raise ValueError("B0 lives on the ball B^3 over S^2")
    grid = quadrature_grid(omega, quad_band)
    w, grad_sq, _ = omega.derivatives(grid)
    pref = _b0_prefactor(gamma)

    def evaluate(ni, ne):
        r1, W1 = _legendre_panel(ni)
        r2, W2 = _jacobi_edge(ne, 1 - 2 * gamma)
        inner = pref * _b0_sum(gamma, profile, r1, W1, grid, w, grad_sq, weight)
        outer = pref * _b0_sum(gamma, profile, r2, W2, grid, w, grad_sq, weight)
        return inner, outer

    inner, outer = evaluate(n_inner, n_edge)
    coarse = sum(evaluate(max(n_inner // 2, 4), max(n_edge // 2, 4)))
    total = inner + outer
    return BallIntegral(total, inner, outer, abs(total - coarse))


def adapted_ratio(gamma: float):
    """``r -> rho_*/rho_L`` on S^2's ball for ``s = 1 + gamma``, gamma in (1/2, 1).

    Feeding it to :func:`B0_parts` as ``weight`` gives the integral before the
    relaxation ``rho_*/rho_L <= 1``.
    """
    sol = reconstruct(solve_F(2, 1 + gamma))

    def ratio(r):
        _, T = sol.evaluate(np.asarray(r, dtype=float))
        return np.exp(T) * (1 + np.asarray(r) ** 2) / 2

    return ratio


def B0(gamma: float, profile: ExtensionProfile, **kwargs) -> float:
    """Upper bound for ``A0``: the weighted extension energy of ``e^((1-gamma) Omega)``.

    ``Gamma(g)/Gamma(2-g) 2^(2g-1) (1-g) int_B3 e^(2(1-g)Omega) |grad Omega|^2_{g_L}
    rho_L^(1-2g) dvol_{g_L}``, reduced in polar coordinates to
    ``int 2 rho_L^(2-2g)/(1-r^2) e^(2(1-g)Omega) (r^2 Omega_r^2 + |grad_theta Omega|^2) dr dtheta``.
    """
    return B0_parts(gamma, profile, **kwargs).total


def b1_radial_nodes(gamma: float, n_inner: int = N_INNER, n_edge: int = N_EDGE):
    """Radial nodes and weights for ``B1``, ending with a zero-weight node near 1.

    Solve the defining function on exactly these nodes and pass the solution
    to :func:`B1`; the trailing node only anchors ``T(1) = 0``.
    """
    m1 = 3 - 2 * gamma
    r1, W1 = _legendre_panel(n_inner)
    r2, W2 = _jacobi_edge(n_edge, m1)
    return np.concatenate([r1, r2, [B1_TAIL]]), np.concatenate([W1, W2, [0.0]])


def _check_b1_gamma(gamma: float):
    if not 1.75 < gamma < 2:
        raise ValueError(f"B1 needs gamma in (7/4, 2), got {gamma!r}")


def _b1_prefactor(gamma: float) -> float:
    return 2 ** (2 * gamma - 3) * math.gamma(gamma) / math.gamma(3 - gamma) * (2 - gamma)


def B1_parts(gamma: float, profile: ExtensionProfile, sol: DefiningFunctionSolution | None = None,
             n_inner: int = N_INNER, n_edge: int = N_EDGE,
             quad_band: int | None = None) -> BallIntegral:
    """``B1`` with its radial split and the smallest pointwise bracket value.

    The error estimate is the total at halved node counts (a second ODE solve).
    """
    _check_b1_gamma(gamma)
    omega = profile.omega
    if omega.n != 4 or not omega.zonal:
        raise ValueError("B1 needs a zonal function on S^4")
    r, W = b1_radial_nodes(gamma, n_inner, n_edge)
    if sol is None:
        sol = solve_adapted(4, 2 + gamma, grid=r)
    else:
        if sol.n != 4 or abs(sol.s - (2 + gamma)) > 1e-14:
            raise ValueError(f"defining function solved for (n={sol.n}, s={sol.s}), "
                             f"need (4, {2 + gamma})")
        if sol.r_grid.shape != r.shape or not np.array_equal(sol.r_grid, r):
            raise ValueError("defining function must be solved on b1_radial_nodes(gamma)")
        if sol.P_tt is None:
            raise ValueError("defining function needs curvature fields (use solve_adapted)")
    grid = quadrature_grid(omega, quad_band)
    w, grad_sq, lap = omega.derivatives(grid)
    inner, outer, lo = _b1_sum(gamma, r, W, sol, grid, w, grad_sq, lap)
    pref = _b1_prefactor(gamma)
    total = pref * (inner + outer)
    rc, Wc = b1_radial_nodes(gamma, max(n_inner // 2, 4), max(n_edge // 2, 4))
    solc = solve_adapted(4, 2 + gamma, grid=rc)
    coarse = pref * sum(_b1_sum(gamma, rc, Wc, solc, grid, w, grad_sq, lap)[:2])
    return BallIntegral(total, pref * inner, pref * outer, abs(total - coarse), lo)


def _b1_sum(gamma, r, W, sol, grid, w, grad_sq, lap):
    n = 4
    eps = 2 - gamma
    m1 = 3 - 2 * gamma
    chi, d1, d2 = cutoff(r, derivatives=True)
    rho0 = (1 - r * r) / 2
    T, F, J, Prr, Ptt = sol.T, sol.F, sol.J, sol.P_rr, sol.P_tt
    col = lambda v: v[:, None]  # noqa: E731
    chi, d1, d2, rr, rho0c, T, F, J, Prr, Ptt = map(col, (chi, d1, d2, r, rho0, T, F, J, Prr, Ptt))
    w, grad_sq, lap = w[None, :], grad_sq[None, :], lap[None, :]

    lap_Omega = -(d2 + n * d1 / rr) * w + chi * lap / rr**2
    grad2 = d1**2 * w**2 + chi**2 * grad_sq / rr**2
    X = np.exp(-2 * T) * (lap_Omega + m1 * (rr / rho0c) * d1 * w
                          - (n + m1 - 1) * F * d1 * w - eps * grad2)
    bracket = (X**2 + (n + m1 - 1) * J * np.exp(-2 * T) * grad2
               - 4 * np.exp(-4 * T) * (Prr * d1**2 * w**2 + Ptt * chi**2 * grad_sq / rr**4))
    measure = rho0c**m1 * np.exp((m1 + n + 1) * T) * rr**n
    dens = np.exp(2 * eps * chi * w) * bracket * measure
    per_r = np.array([grid.integrate(v) for v in dens])
    weighted = W * per_r
    split = r < 2 / 3
    live = W > 0
    return float(np.sum(weighted[split])), float(np.sum(weighted[~split])), float(bracket[live].min())


def B1(gamma: float, profile: ExtensionProfile, sol: DefiningFunctionSolution | None = None,
       **kwargs) -> float:
    """Upper bound for ``A1`` from the weighted fourth-order extension energy.

    ``2^(2g-3) Gamma(g)/Gamma(3-g) (2-g) int_B5 e^(2(2-g)Omega)
    ([Delta_phi Omega - (2-g)|grad Omega|^2]^2 + (n+m1-1) J |grad Omega|^2
    - 4 P(grad Omega, grad Omega)) rho_*^m1 dvol_{g_*}`` with ``m1 = 3 - 2g``,
    all quantities taken in the adapted metric and rewritten in flat polar
    coordinates through ``g_* = e^(2T) g_0``.
    """
    return B1_parts(gamma, profile, sol, **kwargs).total


@dataclass(frozen=True)
class CurvatureCheck:
    gamma: float
    target: float
    max_deviation: float
    C: float


def curvature_combination(gamma: float, sol: DefiningFunctionSolution | None = None,
                          n_edge: int = N_EDGE) -> CurvatureCheck:
    """Compare ``(n+m1-1) e^(2T) J / r^2 - 4 P_tt / r^4`` with ``8(2-g)/(g-1) + 2`` on [2/3, 1).

    Both sides multiply ``|grad_theta omega|^2`` when ``Omega = omega`` near
    the boundary; ``C`` is the smallest constant with deviation ``<= C rho_0``.
    """
    _check_b1_gamma(gamma)
    if sol is None:
        r, _ = b1_radial_nodes(gamma, n_edge=n_edge)
        sol = solve_adapted(4, 2 + gamma, grid=r)
    n, m1 = 4, 3 - 2 * gamma
    r = sol.r_grid
    mask = (r >= 2 / 3) & (r < B1_TAIL)  # the anchor node is outside the quadrature
    rho0 = (1 - r * r) / 2
    combo = (n + m1 - 1) * np.exp(2 * sol.T) * sol.J / r**2 - 4 * sol.P_tt / r**4
    target = 8 * (2 - gamma) / (gamma - 1) + 2
    dev = np.abs(combo[mask] - target)
    return CurvatureCheck(gamma, target, float(dev.max()), float(np.max(dev / rho0[mask])))


@dataclass(frozen=True)
class ContinuationRecord:
    gamma: float
    A: float
    B: float
    target_A: float
    target_B: float
    n: int

    @property
    def target(self) -> float:
        return self.target_A

    @property
    def gap(self) -> float:
        return self.B - self.A

    def chain_holds(self, rel: float = 1e-6) -> bool:
        return self.A <= self.B + rel * max(1.0, abs(self.B))

    def row(self) -> dict:
        return {"gamma": self.gamma, "A": self.A, "B": self.B,
                "targetA": self.target_A, "targetB": self.target_B, "gap": self.gap}

    def to_dict(self) -> dict:
        return asdict(self) | {"gap": self.gap}


def _workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def sweep(n: int, omega: FunctionSpec, gammas, workers: int | None = None,
          quad_band: int | None = None) -> list[ContinuationRecord]:
    """One record per order, in input order.

    ``gammas`` must increase strictly toward ``n/2`` inside (0, 1) for n=2
    and (7/4, 2) for n=4.  Points are evaluated concurrently when more than
    one worker is configured (argument or ``FRACSOBOLEV_THREADS``).
    """
    gammas = [float(g) for g in gammas]
    if n not in (2, 4):
        raise ValueError("continuation is implemented on S^2 and S^4")
    if omega.n != n:
        raise ValueError(f"omega lives on S^{omega.n}, not S^{n}")
    if not gammas or any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise ValueError("gammas must be nonempty and strictly increasing")
    lo, hi = (0.0, 1.0) if n == 2 else (1.75, 2.0)
    bad = [g for g in gammas if not lo < g < hi]
    if bad:
        raise ValueError(f"orders {bad} outside ({lo}, {hi})")

    profile = ExtensionProfile(omega)
    if n == 2:
        tA, tB = onofri_limit_target(omega, quad_band), gradient_energy(omega)

        def one(g):
            return ContinuationRecord(g, A0(g, omega, quad_band), B0(g, profile, quad_band=quad_band),
                                      tA, tB, 2)
    else:
        tA, tB = paneitz_limit_target(omega, quad_band), paneitz_energy(omega)

        def one(g):
            return ContinuationRecord(g, A1(g, omega, quad_band), B1(g, profile, quad_band=quad_band),
                                      tA, tB, 4)

    k = _workers(workers)
    if k == 1:
        return [one(g) for g in gammas]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(one, gammas))


@dataclass(frozen=True)
class Extrapolation:
    A_inf: float
    B_inf: float
    rate_A: float
    rate_B: float
    residual_A: float
    residual_B: float
    degree: int


def extrapolate_limit(records, degree: int = 1) -> Extrapolation:
    """Least-squares polynomial fit of ``A`` and ``B`` in ``eps = n/2 - gamma``.

    ``degree=1`` is the plain linear fit; ``degree=2`` removes the
    next-order term (Richardson style) and needs distinct abscissae.
    """
    records = list(records)
    if len(records) < 3:
        raise ValueError("need at least 3 records")
    eps = np.array([r.n / 2 - r.gamma for r in records])
    if len(np.unique(eps)) < degree + 1:
        raise DegenerateFitError("degenerate fit: not enough distinct orders")
    V = np.vander(eps, degree + 1, increasing=True)
    out = []
    for vals in (np.array([r.A for r in records]), np.array([r.B for r in records])):
        coef, *_ = np.linalg.lstsq(V, vals, rcond=None)
        out.append((float(coef[0]), float(coef[1]), float(np.max(np.abs(V @ coef - vals)))))
    (a0, ka, ra), (b0, kb, rb) = out
    return Extrapolation(a0, b0, ka, kb, ra, rb, degree)
