"""Boundary defining functions of hyperbolic space in the ball model.

Four defining functions of ``B^(n+1)`` with ``g_+ = 4|dx|^2/(1-|x|^2)^2``:

* geodesic normal ``rho = 2(1-r)/(1+r)``
* Lee's ``rho_L = (1-r^2)/(1+r^2)``
* flat ``rho_0 = (1-r^2)/2``
* adapted ``rho_* = v_*^(1/(n-s))`` where ``(Delta_+ - s(n-s)) v_* = 0``.

The adapted one is radial; writing ``rho_* = rho_0 e^T`` and ``F = T'`` gives
the Riccati equation

    F' + (n-s) F^2 + ((2s-n-1) r / rho_0 + n/r) F + (2s-n-1)/rho_0 = 0,

singular at both ends.  It is integrated forward in ``x = -ln(1-r)``: in that
variable the boundary singularity becomes an O(1) attracting term, so an
explicit high-order method needs no special stiffness handling, and every
trajectory regular at r=0 converges to the bounded solution at r=1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from .specfun import d_gamma, gamma_ratio

__all__ = [
    "ClosedFormDefiners",
    "DefiningFunctionSolution",
    "ConvergenceError",
    "closed_form_definers",
    "radial_grid",
    "solve_F",
    "reconstruct",
    "curvature_J",
    "schouten_components",
    "scalar_curvature",
    "ode_residual",
    "boundary_limits",
    "check_radial_bounds",
    "boundary_expansion_fit",
    "solve_adapted",
]

R_START = 1e-3
DELTA = 1e-6


class ConvergenceError(RuntimeError):
    """The ODE integrator did not reach the requested radius."""


@dataclass(frozen=True)
class ClosedFormDefiners:
    r: np.ndarray
    rho: np.ndarray
    rho_L: np.ndarray
    rho_0: np.ndarray


def closed_form_definers(r) -> ClosedFormDefiners:
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise ValueError("radius must lie in [0, 1)")
    return ClosedFormDefiners(
        r=r,
        rho=2 * (1 - r) / (1 + r),
        rho_L=(1 - r * r) / (1 + r * r),
        rho_0=(1 - r * r) / 2,
    )


def radial_grid(n_interior: int = 200, n_boundary: int = 400, delta: float = DELTA) -> np.ndarray:
    """Uniform on [0, 2/3], uniform in ``ln(1-r)`` on [2/3, 1-delta]."""
    inner = np.linspace(0.0, 2 / 3, n_interior, endpoint=False)
    outer = 1 - np.exp(np.linspace(math.log(1 / 3), math.log(delta), n_boundary))
    return np.concatenate([inner, outer])


@dataclass(frozen=True, eq=False)
class DefiningFunctionSolution:
    n: int
    s: float
    r_grid: np.ndarray
    F: np.ndarray
    T: np.ndarray | None = None
    t: np.ndarray | None = None
    rho_star: np.ndarray | None = None
    J: np.ndarray | None = None
    P_rr: np.ndarray | None = None
    P_tt: np.ndarray | None = None
    # raw state interpolant x -> (F, T - T(0)); not part of the public record
    _dense: object = field(default=None, repr=False)
    _T_shift: float = field(default=0.0, repr=False)

    @property
    def gamma(self) -> float:
        return self.s - self.n / 2

    @property
    def k(self) -> float:
        """``2s - n - 1``, the coefficient of the boundary singularity."""
        return 2 * self.s - self.n - 1

    @property
    def rho_0(self) -> np.ndarray:
        return (1 - self.r_grid**2) / 2

    @property
    def Fprime(self) -> np.ndarray:
        """``F' = T''`` read off the ODE (no differencing)."""
        return _rhs(self.n, self.s, self.r_grid, self.F)

    @property
    def Phi(self) -> np.ndarray:
        """``(n-s) int_1^r F``, i.e. ``(n-s) T``."""
        self._need("T")
        return (self.n - self.s) * self.T

    def _need(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise ValueError(f"solution field {name!r} not filled yet")

    def evaluate(self, r) -> tuple[np.ndarray, np.ndarray]:
        """``(F, T)`` at arbitrary radii via the integrator's dense output."""
        r = np.asarray(r, dtype=float)
        F = np.empty_like(r)
        T = np.empty_like(r)
        a, b = _series(self.n, self.s)
        low = r < R_START
        F[low] = a * r[low] + b * r[low] ** 3
        T[low] = a * r[low] ** 2 / 2 + b * r[low] ** 4 / 4
        if np.any(~low):
            y = self._dense(-np.log1p(-r[~low]))
            F[~low], T[~low] = y[0], y[1]
        return F, T + self._T_shift


def _series(n: int, s: float):
    """Taylor coefficients ``F = a r + b r^3 + O(r^5)`` at the origin."""
    k = 2 * s - n - 1
    a = -2 * k / (n + 1)
    b = -(2 * k + 2 * k * a + (n - s) * a * a) / (n + 3)
    return a, b


def _rhs(n: int, s: float, r, F):
    r = np.asarray(r, dtype=float)
    F = np.asarray(F, dtype=float)
    k = 2 * s - n - 1
    rho0 = (1 - r * r) / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -(n - s) * F * F - (k * r / rho0 + n / r) * F - k / rho0
    a, _ = _series(n, s)
    return np.where(r == 0, a, out)


def _check_s(n: int, s: float):
    if n < 2:
        raise ValueError("need n >= 2")
    if not (n + 1) / 2 < s < n:
        raise ValueError(f"s={s!r} outside ((n+1)/2, n) = ({(n + 1) / 2}, {n})")


def solve_F(n: int, s: float, grid=None, delta: float = DELTA,
            rtol: float = 1e-13, atol: float = 1e-15) -> DefiningFunctionSolution:
    """Integrate the Riccati equation for ``F = T'`` on ``grid``.

    ``grid`` defaults to :func:`radial_grid`; it must be increasing inside
    ``[0, 1)``.  Nodes below ``R_START`` take the two-term series.
    """
    _check_s(n, s)
    r = radial_grid(delta=delta) if grid is None else np.asarray(grid, dtype=float)
    if r.ndim != 1 or np.any(np.diff(r) <= 0) or r[0] < 0 or r[-1] >= 1:
        raise ValueError("radial grid must be strictly increasing inside [0, 1)")
    k = 2 * s - n - 1
    a, b = _series(n, s)

    def rhs(x, y):
        om = math.exp(-x)
        rr = 1 - om
        rho0 = 0.5 * om * (1 + rr)
        F = y[0]
        dF = -(n - s) * F * F - (k * rr / rho0 + n / rr) * F - k / rho0
        return [om * dF, om * F]

    x0 = -math.log1p(-R_START)
    x_end = -math.log1p(-max(r[-1], R_START))
    y0 = [a * R_START + b * R_START**3, a * R_START**2 / 2 + b * R_START**4 / 4]
    sol = solve_ivp(rhs, (x0, x_end), y0, method="DOP853", rtol=rtol, atol=atol,
                    dense_output=True)
    if not sol.success:
        raise ConvergenceError(f"integration failed for n={n}, s={s}: {sol.message}")
    out = DefiningFunctionSolution(n=n, s=s, r_grid=r, F=np.zeros_like(r), _dense=sol.sol)
    F, _ = out.evaluate(r)
    return replace(out, F=F)


def reconstruct(sol: DefiningFunctionSolution) -> DefiningFunctionSolution:
    """Fill ``T = -int_r^1 F``, ``t = e^T`` and ``rho_* = rho_0 t``.

    Beyond the last node F is continued linearly using ``F'`` from the ODE.
    """
    r_max = sol.r_grid[-1]
    dlt = 1 - r_max
    F_end, T_raw_end = sol.evaluate(np.array([r_max]))
    F_end, T_raw_end = float(F_end[0]), float(T_raw_end[0]) - sol._T_shift
    dF_end = float(_rhs(sol.n, sol.s, r_max, F_end))
    T_end = -(F_end * dlt + dF_end * dlt * dlt / 2)
    shifted = replace(sol, _T_shift=T_end - T_raw_end)
    _, T = shifted.evaluate(sol.r_grid)
    t = np.exp(T)
    return replace(shifted, T=T, t=t, rho_star=sol.rho_0 * t)


def _one_plus_rF_over_rho0(sol: DefiningFunctionSolution) -> np.ndarray:
    return (1 + sol.r_grid * sol.F) / sol.rho_0


def curvature_J(sol: DefiningFunctionSolution) -> np.ndarray:
    """Weighted scalar curvature ``e^(-2T) (2(1 + r T')/rho_0 - T'^2)``."""
    sol._need("T")
    return np.exp(-2 * sol.T) * (2 * _one_plus_rF_over_rho0(sol) - sol.F**2)


def _ricci(sol: DefiningFunctionSolution):
    """Ricci components of ``g_* = e^(2T) g_0`` in (r, normal-theta) coordinates.

    Returns ``(Ric_rr, Ric_tt / r^2)``; the angular block is ``Ric_tt delta_ij``.
    """
    n, r, F = sol.n, sol.r_grid, sol.F
    Tpp = sol.Fprime
    a, _ = _series(sol.n, sol.s)
    with np.errstate(divide="ignore", invalid="ignore"):
        F_over_r = np.where(r == 0, a, F / r)
    lap_T = -Tpp - n * F_over_r  # positive Laplacian of the flat metric
    ric_rr = -(n - 1) * (Tpp - F**2) + (lap_T - (n - 1) * F**2)
    ric_tt_over_r2 = -(n - 1) * F_over_r + (lap_T - (n - 1) * F**2)
    return ric_rr, ric_tt_over_r2


def scalar_curvature(sol: DefiningFunctionSolution) -> np.ndarray:
    sol._need("T")
    ric_rr, ric_tt_r2 = _ricci(sol)
    return np.exp(-2 * sol.T) * (ric_rr + sol.n * ric_tt_r2)


def schouten_components(sol: DefiningFunctionSolution):
    """Coordinate components ``(P_rr, P_tt)`` of the Schouten tensor of ``g_*``.

    ``P = (Ric - R g_*/(2n)) / (n-1)``; ``P_tt`` is the coefficient of
    ``delta_ij`` in normal coordinates of the sphere, ``P_r theta = 0``.
    """
    sol._need("T")
    n, r = sol.n, sol.r_grid
    ric_rr, ric_tt_r2 = _ricci(sol)
    e2T = np.exp(2 * sol.T)
    R = (ric_rr + n * ric_tt_r2) / e2T
    P_rr = (ric_rr - R * e2T / (2 * n)) / (n - 1)
    P_tt = (ric_tt_r2 - R * e2T / (2 * n)) * r**2 / (n - 1)
    return P_rr, P_tt


def solve_adapted(n: int, s: float, grid=None, delta: float = DELTA) -> DefiningFunctionSolution:
    """``solve_F`` followed by reconstruction and all curvature fields."""
    sol = reconstruct(solve_F(n, s, grid=grid, delta=delta))
    sol = replace(sol, J=curvature_J(sol))
    P_rr, P_tt = schouten_components(sol)
    return replace(sol, P_rr=P_rr, P_tt=P_tt)


def ode_residual(sol: DefiningFunctionSolution, h: float = 1e-4) -> np.ndarray:
    """Residual of the ODE at interior nodes, in the ``x = -ln(1-r)`` form.

    ``dF/dx`` comes from a five-point difference of the dense output, so the
    check is independent of the right-hand side used to build it.
    """
    r = sol.r_grid
    mask = (r >= R_START) & (r < r[-1])
    x = -np.log1p(-r[mask])
    lo = -math.log1p(-R_START)
    x = np.clip(x, lo + 2 * h, -math.log1p(-r[-1]) - 2 * h)
    f = lambda xx: sol._dense(xx)[0]  # noqa: E731
    dFdx = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
    rr = 1 - np.exp(-x)
    F = f(x)
    return np.abs(dFdx - (1 - rr) * _rhs(sol.n, sol.s, rr, F))


def _targets(n: int, s: float) -> dict:
    m = 2 * s - n - 2
    if m <= 0:
        return dict.fromkeys(["F", "T2", "J", "P_rr", "P_tt", "R", "q"], math.nan) | {"F": -1.0}
    return {
        "F": -1.0,
        "T2": -(n + 1 - s) / m,
        "J": n / m,
        "P_rr": n / (2 * m),
        "P_tt": 0.5,
        "R": n * n * (2 * s - n - 1) / m,
        "q": (s - 1) / m,
    }


def boundary_limits(sol: DefiningFunctionSolution) -> dict:
    """Values at the last node next to their boundary limits.

    Each entry is ``(observed, target, relative_error)``; curvature limits
    are only meaningful for ``s > (n+3)/2``.
    """
    sol._need("T", "J", "P_rr", "P_tt")
    tg = _targets(sol.n, sol.s)
    R = scalar_curvature(sol)
    obs = {
        "F": sol.F[-1],
        "T2": sol.Fprime[-1],
        "J": sol.J[-1],
        "P_rr": sol.P_rr[-1],
        "P_tt": sol.P_tt[-1],
        "R": R[-1],
        "q": _one_plus_rF_over_rho0(sol)[-1],
    }
    return {k: (float(v), tg[k], abs(float(v) - tg[k]) / abs(tg[k])) for k, v in obs.items()}



def check_radial_bounds(sol: DefiningFunctionSolution, tol: float = 1e-10) -> dict:
    """Worst-case margins and smallest constants for the radial estimates.

    Every entry carries ``applicable`` (the hypothesis on ``s`` holds),
    ``violated`` (a sign/order bound fails by more than ``tol``) and the data.
    Constants ``C`` are maxima over nodes with ``r >= 1/3``.
    """
    sol._need("T", "J", "P_rr", "P_tt")
    n, s, r = sol.n, sol.s, sol.r_grid
    rho0 = sol.rho_0
    defs = closed_form_definers(r)
    q = _one_plus_rF_over_rho0(sol)
    one_rF = 1 + r * sol.F
    tg = _targets(n, s)
    far = r >= 1 / 3
    m2 = 2 * s - n - 2
    m3 = 2 * s - n - 3
    report = {}

    # rho_0 <= rho_* <= rho_L, compared in log form
    low = sol.T
    high = np.log(defs.rho_L / rho0) - sol.T
    margin = float(min(low.min(), high.min()))
    report["sandwich"] = {"applicable": s >= (n + 1) / 2, "margin": margin,
                     "violated": margin < -tol}

    margin = float(min(one_rF.min(), (-r * sol.F).min()))
    report["one_plus_rF"] = {"applicable": s > n / 2 + 1, "margin": margin,
                     "strict_lower": bool(one_rF.min() > 0), "violated": margin < -tol}

    # non-increasing rho_0^-(2s-n-1) r^n e^Phi F
    mono = rho0 ** (-(2 * s - n - 1)) * r**n * np.exp(sol.Phi) * sol.F
    steps = np.diff(mono)
    scale = np.maximum(np.abs(mono[1:]), np.abs(mono[:-1])) + 1e-300
    report["phi_monotone"] = {"applicable": 2 * s - n - 1 > 0,
                              "max_increase": float(np.max(steps / scale)),
                              "violated": bool(np.any(steps > tol * scale))}

    report["q_upper"] = {"applicable": s > n / 2 + 1,
                     "C": float(np.max(q[far]) * m2) if m2 > 0 else math.inf,
                     "violated": bool(q.min() < -tol)}

    def fitted(dev):
        return float(np.max(np.abs(dev[far]) / rho0[far]))

    late = s > (n + 3) / 2
    report["q_rate"] = {"applicable": late, "C": fitted(q - tg["q"]) * m3 if late else None}
    report["hessian_rate"] = {
        "applicable": late,
        "C_T2": fitted(sol.Fprime - tg["T2"]) * m3 if late else None,
        "C_F": fitted(1 + sol.F),
        "C_T": fitted(sol.T),
        "C_t": fitted(sol.t - 1),
    }
    report["J_rate"] = {"applicable": late, "C": fitted(sol.J - tg["J"]) * m3 if late else None}
    R = scalar_curvature(sol)
    report["schouten_rate"] = {
        "applicable": late,
        "C_rr": fitted(sol.P_rr - tg["P_rr"]) * m3 if late else None,
        "C_tt": fitted(sol.P_tt - tg["P_tt"]) * m3 if late else None,
        "C_R": fitted(R - tg["R"]) * m3 if late else None,
        "P_rtheta": 0.0,
    }
    report["violations"] = [k for k, v in report.items()
                            if isinstance(v, dict) and v.get("applicable") and v.get("violated")]
    return report


@dataclass(frozen=True)
class ExpansionFit:
    """Fitted ``rho_*/rho ~ c0 + c2 rho^2 + cg rho^(2 gamma) + ...``."""

    exponents: tuple
    coefficients: tuple
    leading: float
    rho2: float
    rho2gamma: float
    expected_rho2: float
    expected_rho2gamma_stated: float
    expected_rho2gamma_scaled: float
    residual: float
    degenerate: bool

    @property
    def rel_err_rho2(self) -> float:
        return abs(self.rho2 / self.expected_rho2 - 1)

    @property
    def rel_err_rho2gamma_stated(self) -> float:
        return abs(self.rho2gamma / self.expected_rho2gamma_stated - 1)

    @property
    def rel_err_rho2gamma_scaled(self) -> float:
        return abs(self.rho2gamma / self.expected_rho2gamma_scaled - 1)


def boundary_expansion_fit(sol: DefiningFunctionSolution, npts: int = 2**14,
                           r_min: float = 0.8, nuisance: bool = True,
                           min_gap: float = 0.05) -> ExpansionFit:
    """Least-squares fit of ``rho_*/rho`` near the boundary.

    Basis ``{1, rho^2, rho^(2 gamma)}``, plus ``{rho^4, rho^(2 gamma + 2)}``
    when ``nuisance`` is set to absorb the next-order remainder.  Two
    reference values are returned for the ``rho^(2 gamma)`` term:
    ``Gamma(n/2+g)/(d_g Gamma(n/2-g))`` and that value divided by ``n - s``,
    which is what ``rho_* = v_*^(1/(n-s))`` produces from the scattering
    coefficient of ``v_*``.
    """
    sol._need("T")
    n, s, g = sol.n, sol.s, sol.gamma
    if n < 4 or not n / 2 + 1 < s < n:
        raise ValueError("expansion holds for n >= 4 and s in (n/2+1, n)")
    r = np.linspace(r_min, sol.r_grid[-1], npts)
    _, T = sol.evaluate(r)
    rho = 2 * (1 - r) / (1 + r)
    y = np.exp(T) * (1 + r) ** 2 / 4  # rho_*/rho = t rho_0/rho
    exps = [0.0, 2.0, 2 * g]
    if nuisance:
        exps += [4.0, 2 * g + 2]
    gaps = [abs(a - b) for i, a in enumerate(exps) for b in exps[i + 1:]]
    degenerate = min(gaps) < min_gap
    A = np.stack([rho**e for e in exps], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.max(np.abs(A @ coef - y)))
    stated = gamma_ratio(n / 2, g) / d_gamma(g)
    return ExpansionFit(
        exponents=tuple(exps),
        coefficients=tuple(float(c) for c in coef),
        leading=float(coef[0]),
        rho2=float(coef[1]),
        rho2gamma=float(coef[2]),
        expected_rho2=-n / (4 * (2 * s - n - 2)),
        expected_rho2gamma_stated=stated,
        expected_rho2gamma_scaled=stated / (n - s),
        residual=resid,
        degenerate=degenerate,
    )
