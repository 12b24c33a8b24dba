"""Fractional conformal operators on spheres and Branson's dimensional continuation.

Spectral evaluation of the order-``2 gamma`` conformal operators on S^n, the
deficits of the sharp Sobolev and Moser-Trudinger-Onofri inequalities, the
adapted boundary defining function of hyperbolic space, and the ball
integrals that carry the Sobolev inequalities to their logarithmic limits on
S^2 and S^4.
"""

from .continuation import (
    B0, B1, ContinuationRecord, ExtensionProfile, extrapolate_limit, sweep,
)
from .defining import (
    DefiningFunctionSolution, boundary_expansion_fit, closed_form_definers, solve_adapted,
    solve_F, check_radial_bounds,
)
from .extremizers import ConformalFactor, conformal_weight, fractional_extremizer
from .functionals import (
    A0, A1, DeficitReport, branson_rewrite_gap, classical_sobolev_deficit, onofri_deficit_s2,
    onofri_limit_target, paneitz_limit_target, paneitz_onofri_deficit_s4, sobolev_deficit,
)
from .functionspec import FunctionSpec, load_spec, parse_builtin
from .operators import multiplier_P2gamma, sharp_constants, spectral_multiplier
from .spectral import analyze, build_grid, synthesize
from .specfun import PoleError, d_gamma, gamma_ratio, log_gamma

__version__ = "0.1.0"

__all__ = [
    "A0", "A1", "B0", "B1", "ConformalFactor", "ContinuationRecord", "DeficitReport",
    "DefiningFunctionSolution", "ExtensionProfile", "FunctionSpec", "PoleError", "analyze",
    "boundary_expansion_fit", "branson_rewrite_gap", "build_grid", "classical_sobolev_deficit",
    "closed_form_definers", "conformal_weight", "d_gamma", "extrapolate_limit",
    "fractional_extremizer", "gamma_ratio", "load_spec", "log_gamma", "multiplier_P2gamma",
    "onofri_deficit_s2", "onofri_limit_target", "paneitz_limit_target",
    "paneitz_onofri_deficit_s4", "parse_builtin", "sharp_constants", "sobolev_deficit",
    "solve_F", "solve_adapted", "spectral_multiplier", "sweep", "synthesize",
    "check_radial_bounds",
]
