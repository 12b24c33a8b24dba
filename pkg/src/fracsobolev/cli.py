"""Command-line front end: ``fracsobolev <command> [flags]``.

Commands emit CSV (17 significant digits) or JSON on stdout or ``--output``.
A JSON ``--config`` file may supply any flag; flags given on the command line
win.  Exit status: 0 all checks pass, 1 an invariant failed, 2 bad
configuration, 3 a numerical method did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .continuation import DegenerateFitError, extrapolate_limit, sweep
from .defining import (
    ConvergenceError, boundary_limits, closed_form_definers, radial_grid, solve_adapted,
    check_radial_bounds,
)
from .functionals import onofri_deficit_s2, paneitz_onofri_deficit_s4, sobolev_deficit
from .functionspec import load_spec
from .operators import paneitz_energy_multiplier, spectral_multiplier
from .spectral import laplacian_eigenvalue
from .verify import VerifyConfig, run_all

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 1, 2, 3

DEFAULTS = {
    "n": 2,
    "gamma": None,
    "s": None,
    "L": None,
    "omega": None,
    "gammas": None,
    "out": "csv",
    "output": None,
    "seed": 0,
    "tol": 1.0,
    "delta": 1e-6,
    "grid": 400,
    "only": None,
}


class ConfigError(ValueError):
    """Invalid flags or configuration file."""


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value) + 0.0, ".17g")  # no "-0"
    return "" if value is None else str(value)


def write_table(rows: list, columns: list, out: str, stream) -> None:
    if out == "json":
        stream.write(json.dumps([{c: _jsonable(r[c]) for c in columns} for r in rows], indent=1))
        stream.write("\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(r[c]) for c in columns])


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def parse_gammas(text, n: int) -> list:
    """``0.9,0.99`` or ``start:end:count[:geometric]``.

    The geometric form spaces ``n/2 - gamma`` geometrically, so points crowd
    toward the critical order.
    """
    if isinstance(text, (list, tuple)):
        return [float(g) for g in text]
    text = str(text)
    if ":" not in text:
        return [float(g) for g in text.split(",") if g.strip()]
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "geometric"):
        raise ConfigError(f"bad --gammas {text!r}; want start:end:count[:geometric]")
    a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
    if k < 1:
        raise ConfigError("--gammas count must be positive")
    if len(parts) == 4:
        return list(n / 2 - np.geomspace(n / 2 - a, n / 2 - b, k))
    return list(np.linspace(a, b, k))


def _need(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError("missing " + ", ".join("--" + k for k in missing))


def cmd_spectrum(cfg, stream) -> int:
    _need(cfg, "gamma", "L")
    n, g, L = cfg["n"], cfg["gamma"], cfg["L"]
    mult = spectral_multiplier(n, g, L)
    rows = [{"l": l, "mu_l": mult[l], "laplacian_eig": laplacian_eigenvalue(n, l),
             "paneitz_energy": paneitz_energy_multiplier(l) if n == 4 else math.nan}
            for l in range(L + 1)]
    write_table(rows, ["l", "mu_l", "laplacian_eig", "paneitz_energy"], cfg["out"], stream)
    return EXIT_OK


def _report(rep, cfg, stream, bound: float) -> int:
    if cfg["out"] == "json":
        stream.write(rep.to_json() + "\n")
    else:
        write_table([rep.row()], ["name", "n", "gamma", "lhs", "rhs", "deficit"], "csv", stream)
    if rep.deficit < -bound * cfg["tol"] * max(1.0, abs(rep.scale)):
        print(f"invariant failed: {rep.name} deficit {rep.deficit:.3e} < 0", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_sobolev(cfg, stream) -> int:
    _need(cfg, "gamma", "omega")
    f = load_spec(cfg["omega"], cfg["n"])
    rep = sobolev_deficit(f, cfg["n"], cfg["gamma"], quad_band=cfg["L"])
    return _report(rep, cfg, stream, 1e-8)


def cmd_onofri(cfg, stream) -> int:
    _need(cfg, "omega")
    w = load_spec(cfg["omega"], cfg["n"])
    if cfg["n"] == 2:
        rep = onofri_deficit_s2(w, quad_band=cfg["L"])
    elif cfg["n"] == 4:
        rep = paneitz_onofri_deficit_s4(w, quad_band=cfg["L"])
    else:
        raise ConfigError("onofri needs --n 2 or --n 4")
    return _report(rep, cfg, stream, 1e-8)


def cmd_defining(cfg, stream) -> int:
    n = cfg["n"]
    if cfg["s"] is None and cfg["gamma"] is None:
        raise ConfigError("defining needs --s or --gamma")
    s = cfg["s"] if cfg["s"] is not None else n / 2 + cfg["gamma"]
    grid = radial_grid(n_interior=max(cfg["grid"] // 2, 2), n_boundary=cfg["grid"], delta=cfg["delta"])
    sol = solve_adapted(n, s, grid=grid, delta=cfg["delta"])
    bounds = check_radial_bounds(sol)
    if cfg["out"] == "json":
        doc = {"n": n, "s": s, "bounds": bounds,
               "boundary_limits": {k: list(v) for k, v in boundary_limits(sol).items()}}
        stream.write(json.dumps(_jsonable(doc), indent=1) + "\n")
    else:
        defs = closed_form_definers(sol.r_grid)
        cols = {"r": sol.r_grid, "F": sol.F, "T": sol.T, "t": sol.t, "rho_star": sol.rho_star,
                "rho": defs.rho, "rho_L": defs.rho_L, "rho_0": defs.rho_0, "J": sol.J,
                "P_rr": sol.P_rr, "P_tt": sol.P_tt}
        rows = [{k: v[i] for k, v in cols.items()} for i in range(len(sol.r_grid))]
        write_table(rows, list(cols), "csv", stream)
    if bounds["violations"]:
        print("invariant failed: bounds " + ", ".join(bounds["violations"]), file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_continuation(cfg, stream) -> int:
    _need(cfg, "omega", "gammas")
    n = cfg["n"]
    omega = load_spec(cfg["omega"], n)
    gammas = parse_gammas(cfg["gammas"], n)
    recs = sweep(n, omega, gammas, quad_band=cfg["L"])
    rel = 1e-6 * cfg["tol"]
    if cfg["out"] == "json":
        doc = {"records": [r.to_dict() for r in recs]}
        if len(recs) >= 3:
            doc["extrapolation"] = vars(extrapolate_limit(recs))
        stream.write(json.dumps(_jsonable(doc), indent=1) + "\n")
    else:
        write_table([r.row() for r in recs], ["gamma", "A", "B", "targetA", "targetB", "gap"],
                    "csv", stream)
    bad = [r for r in recs if not r.chain_holds(rel)]
    for r in bad:
        print(f"invariant failed: A={r.A:.6g} > B={r.B:.6g} at gamma={r.gamma:.6g}", file=sys.stderr)
    return EXIT_INVARIANT if bad else EXIT_OK


def cmd_verify_all(cfg, stream) -> int:
    only = cfg["only"]
    if isinstance(only, str):
        only = [int(k) for k in only.split(",")]
    vcfg = VerifyConfig(tol_scale=cfg["tol"], L=cfg["L"], seed=cfg["seed"])
    results = run_all(vcfg, only=only)
    if cfg["out"] == "json":
        stream.write(json.dumps(_jsonable([r.to_dict() for r in results]), indent=1) + "\n")
    else:
        rows = [{"criterion": r.number, **c.row()} for r in results for c in r.checks]
        write_table(rows, ["criterion", "check", "measured", "bound", "passed"], "csv", stream)
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(r.summary(), file=sys.stderr)
    return EXIT_INVARIANT if failed else EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sobolev": cmd_sobolev,
    "onofri": cmd_onofri,
    "defining": cmd_defining,
    "continuation": cmd_continuation,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracsobolev", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("--config", help="JSON file with flag values")
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--s", type=float, help="ODE parameter s = n/2 + gamma (defining)")
    p.add_argument("--L", type=int, help="band limit (quadrature band for nonlinear terms)")
    p.add_argument("--omega", "--f", dest="omega", help="FunctionSpec builtin or file")
    p.add_argument("--gammas", help="list a,b,c or start:end:count[:geometric]")
    p.add_argument("--out", choices=["csv", "json"])
    p.add_argument("--output", help="write here instead of stdout")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, help="scale factor applied to every tolerance")
    p.add_argument("--delta", type=float, help="distance of the last radial node from 1")
    p.add_argument("--grid", type=int, help="radial nodes near the boundary")
    p.add_argument("--only", help="comma-separated criterion numbers (verify-all)")
    return p


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(data) - set(DEFAULTS) - {"command"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update({k: v for k, v in data.items() if k != "command"})
    cfg.update({k: v for k, v in vars(args).items() if v is not None and k in DEFAULTS})
    if cfg["tol"] is None or not cfg["tol"] > 0:
        raise ConfigError("--tol must be positive")
    if cfg["L"] is not None and not 1 <= int(cfg["L"]) <= 512:
        raise ConfigError("--L must lie in [1, 512]")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    buf = io.StringIO()
    try:
        cfg = resolve_config(args)
        status = COMMANDS[args.command](cfg, buf)
    except (ConvergenceError, DegenerateFitError) as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, ArithmeticError, OSError, KeyError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg["output"]:
        Path(cfg["output"]).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return status


if __name__ == "__main__":
    sys.exit(main())
