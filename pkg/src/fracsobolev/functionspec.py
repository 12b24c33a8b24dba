"""Declarative descriptions of test functions on S^n.

A :class:`FunctionSpec` is one of

``zonal-formula``
    ``sum_i amp_i * cos(theta)**k_i``; payload ``{"terms": [[amp, k], ...]}``.
``coefficient-list``
    payload ``{"values": nested list}`` in the layout of
    :class:`~fracsobolev.spectral.HarmonicCoefficients`.
``grid-samples``
    payload ``{"L": int, "zonal": bool, "values": nested list}``, samples on
    ``build_grid(n, L, zonal)``.
``conformal-family``
    payload ``{"a": point or axial scalar, "role": "weight" | "extremizer",
    "gamma": float}``; ``ln u_a`` or ``u_a^((n-2 gamma)/2)`` with
    ``u_a(x) = (1-|a|^2)/|x-a|^2``.

Builtin string forms (used by the CLI)::

    zonal:0.3*cos            zonal:0.1+0.2*cos^2
    conformal:n=2:a=0.5      extremizer:n=4:gamma=1.5:a=0.3
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectral import (
    HarmonicCoefficients,
    SphereGrid,
    analyze,
    build_grid,
    laplacian_eigenvalue,
    synthesize,
    synthesize_gradient,
)

__all__ = ["FunctionSpec", "parse_builtin", "load_spec", "write_samples_csv", "read_samples_csv"]

TAGS = ("zonal-formula", "coefficient-list", "grid-samples", "conformal-family")


@dataclass(frozen=True)
class FunctionSpec:
    tag: str
    n: int
    payload: dict

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown FunctionSpec tag {self.tag!r}")
        if self.n not in (2, 3, 4):
            raise ValueError(f"unsupported dimension {self.n}")
        p = self.payload
        if self.tag == "zonal-formula":
            for term in p["terms"]:
                if len(term) != 2 or int(term[1]) != term[1] or term[1] < 0:
                    raise ValueError(f"bad zonal term {term!r}")
        elif self.tag == "coefficient-list":
            vals = np.asarray(p["values"], dtype=float)
            if vals.ndim == 2 and (self.n != 2 or vals.shape[1] != 2 * vals.shape[0] - 1):
                raise ValueError("full coefficient table must be (L+1, 2L+1) on S^2")
            if vals.ndim not in (1, 2):
                raise ValueError("coefficient table must be 1-D (zonal) or 2-D (full)")
        elif self.tag == "grid-samples":
            grid = self.sample_grid()
            if np.asarray(p["values"]).shape != grid.shape:
                raise ValueError("sample array does not match its grid layout")
        else:
            a = self.axis_point()
            if np.linalg.norm(a) >= 1:
                raise ValueError("conformal parameter must lie in the open unit ball")
            if p.get("role", "weight") not in ("weight", "extremizer"):
                raise ValueError("conformal role must be 'weight' or 'extremizer'")

    # -- structure -------------------------------------------------------
    @property
    def zonal(self) -> bool:
        if self.tag == "zonal-formula":
            return True
        if self.tag == "coefficient-list":
            return np.asarray(self.payload["values"]).ndim == 1
        if self.tag == "grid-samples":
            return bool(self.payload.get("zonal", self.n != 2))
        a = self.axis_point()
        return bool(np.all(a[:-1] == 0))

    @property
    def band_limit(self) -> int:
        """Exact degree for band-limited specs; a resolution estimate otherwise."""
        p = self.payload
        if self.tag == "zonal-formula":
            return int(max((t[1] for t in p["terms"]), default=0))
        if self.tag == "coefficient-list":
            return len(p["values"]) - 1
        if self.tag == "grid-samples":
            return int(p["L"])
        t = float(np.linalg.norm(self.axis_point()))
        if t == 0:
            return 0
        return int(max(math.ceil(16 / (1 - t)), math.ceil(math.log(1e-17) / math.log(t))))

    @property
    def band_limited(self) -> bool:
        return self.tag != "conformal-family" or float(np.linalg.norm(self.axis_point())) == 0

    def axis_point(self) -> np.ndarray:
        a = self.payload["a"]
        if np.isscalar(a):
            out = np.zeros(self.n + 1)
            out[-1] = float(a)
            return out
        out = np.asarray(a, dtype=float)
        if out.shape != (self.n + 1,):
            raise ValueError(f"conformal point must have {self.n + 1} coordinates")
        return out

    def sample_grid(self) -> SphereGrid:
        p = self.payload
        return build_grid(self.n, int(p["L"]), zonal=bool(p.get("zonal", self.n != 2)))

    # -- evaluation ------------------------------------------------------
    def zonal_profile(self, theta):
        """``(f, f', f'')`` in the colatitude for zonal closed-form specs."""
        th = np.asarray(theta, dtype=float)
        x, s = np.cos(th), np.sin(th)
        if self.tag == "zonal-formula":
            f = np.zeros_like(th)
            d1 = np.zeros_like(th)
            d2 = np.zeros_like(th)
            for amp, k in self.payload["terms"]:
                k = int(k)
                f = f + amp * x**k
                if k >= 1:
                    d1 = d1 - amp * k * x ** (k - 1) * s
                    d2 = d2 - amp * k * x**k
                if k >= 2:
                    d2 = d2 + amp * k * (k - 1) * x ** (k - 2) * s**2
            return f, d1, d2
        if self.tag == "conformal-family" and self.zonal:
            t = float(self.axis_point()[-1])
            q = 1 - 2 * t * x + t * t
            w = np.log(1 - t * t) - np.log(q)
            w1 = -2 * t * s / q
            w2 = -2 * t * x / q + 4 * t * t * s**2 / q**2
            if self.payload.get("role", "weight") == "weight":
                return w, w1, w2
            p = (self.n - 2 * float(self.payload["gamma"])) / 2
            f = np.exp(p * w)
            return f, p * w1 * f, (p * w2 + (p * w1) ** 2) * f
        raise ValueError(f"no closed-form zonal profile for tag {self.tag!r}")

    def _closed_form(self) -> bool:
        return self.tag == "zonal-formula" or (self.tag == "conformal-family" and self.zonal)

    def evaluate(self, grid: SphereGrid) -> np.ndarray:
        """Samples of the function on ``grid``."""
        self._check_grid(grid)
        if self._closed_form():
            f = self.zonal_profile(grid.colat_nodes)[0]
            return f if grid.zonal else np.repeat(f[:, None], grid.shape[1], axis=1)
        if self.tag == "conformal-family":
            x = grid.points()
            a = self.axis_point()
            u = (1 - a @ a) / np.sum((x - a) ** 2, axis=-1)
            if self.payload.get("role", "weight") == "weight":
                return np.log(u)
            return u ** ((self.n - 2 * float(self.payload["gamma"])) / 2)
        return synthesize(self.coefficients(), grid)

    def coefficients(self, L: int | None = None) -> HarmonicCoefficients:
        """Expansion coefficients up to degree ``L`` (default: ``band_limit``).

        Non-band-limited specs are projected on a grid resolving ``2L``.
        """
        L = self.band_limit if L is None else L
        L = max(L, 1)
        p = self.payload
        if self.tag == "coefficient-list":
            c = HarmonicCoefficients(self.n, np.asarray(p["values"], dtype=float))
            return c.truncate(L).pad(L)
        if self.tag == "grid-samples":
            grid = self.sample_grid()
            return analyze(np.asarray(p["values"], dtype=float), grid).truncate(L).pad(L)
        if self.tag == "zonal-formula" and self.band_limit <= L:
            grid = build_grid(self.n, max(L, 1), zonal=True)
            c = analyze(self.evaluate(grid), grid)
            return c if self.n != 2 else _zonal_to_kind(c, self.zonal)
        over = min(2 * L, 512)
        grid = build_grid(self.n, over, zonal=self.zonal if self.n == 2 else True)
        return analyze(self.evaluate(grid), grid, L)

    def derivatives(self, grid: SphereGrid):
        """``(f, |grad f|^2, Delta f)`` on ``grid`` (positive Laplacian)."""
        self._check_grid(grid)
        if self._closed_form():
            th = grid.colat_nodes
            f, d1, d2 = self.zonal_profile(th)
            lap = -d2 - (self.n - 1) * np.cos(th) / np.sin(th) * d1
            out = (f, d1**2, lap)
            if not grid.zonal:
                out = tuple(np.repeat(v[:, None], grid.shape[1], axis=1) for v in out)
            return out
        L = min(self.band_limit, grid.L)
        c = self.coefficients(L)
        f = self.evaluate(grid)
        dth, dph = synthesize_gradient(c, grid)
        lam = [laplacian_eigenvalue(self.n, l) for l in range(c.L + 1)]
        lap = synthesize(c.scaled(lam), grid)
        return f, dth**2 + dph**2, lap

    def _check_grid(self, grid: SphereGrid):
        if grid.n != self.n:
            raise ValueError(f"FunctionSpec lives on S^{self.n}, grid on S^{grid.n}")
        if not self.zonal and grid.zonal:
            raise ValueError("non-zonal function needs a full S^2 grid")

    # -- serialisation ---------------------------------------------------
    def to_json(self) -> str:
        return json.dumps({"tag": self.tag, "n": self.n, "payload": self.payload})

    @classmethod
    def from_json(cls, text: str) -> "FunctionSpec":
        doc = json.loads(text)
        return cls(tag=doc["tag"], n=int(doc["n"]), payload=doc["payload"])

    # -- constructors ----------------------------------------------------
    @classmethod
    def zonal_formula(cls, n: int, terms) -> "FunctionSpec":
        return cls("zonal-formula", n, {"terms": [[float(a), int(k)] for a, k in terms]})

    @classmethod
    def from_coefficients(cls, c: HarmonicCoefficients) -> "FunctionSpec":
        return cls("coefficient-list", c.n, {"values": c.values.tolist()})

    @classmethod
    def from_samples(cls, grid: SphereGrid, values) -> "FunctionSpec":
        return cls("grid-samples", grid.n,
                   {"L": grid.L, "zonal": grid.zonal, "values": np.asarray(values).tolist()})


def _zonal_to_kind(c: HarmonicCoefficients, zonal: bool) -> HarmonicCoefficients:
    if zonal:
        return c
    L = c.L
    out = np.zeros((L + 1, 2 * L + 1))
    out[:, L] = c.values
    return HarmonicCoefficients(2, out)


_TERM = re.compile(r"^\s*([+-]?[0-9.eE+-]*?)\s*\*?\s*(cos(?:\^(\d+))?)?\s*$")


def _parse_terms(expr: str):
    terms = []
    # split on + / - that start a new term (not exponent signs)
    for chunk in re.split(r"(?<![eE^*])(?=[+-])", expr.replace(" ", "")):
        if not chunk:
            continue
        m = _TERM.match(chunk)
        if not m or (not m.group(1) and not m.group(2)):
            raise ValueError(f"cannot parse zonal term {chunk!r}")
        coef = m.group(1)
        if coef in ("", "+"):
            amp = 1.0
        elif coef == "-":
            amp = -1.0
        else:
            amp = float(coef)
        k = 0 if not m.group(2) else int(m.group(3) or 1)
        terms.append((amp, k))
    if not terms:
        raise ValueError("empty zonal formula")
    return terms


def parse_builtin(text: str, n: int | None = None) -> FunctionSpec:
    """Parse ``zonal:...``, ``conformal:n=..:a=..`` or ``extremizer:...``."""
    kind, _, rest = text.partition(":")
    if kind == "zonal":
        if n is None:
            raise ValueError("zonal builtin needs an explicit dimension")
        return FunctionSpec.zonal_formula(n, _parse_terms(rest))
    if kind in ("conformal", "extremizer"):
        fields = dict(item.split("=", 1) for item in rest.split(":") if item)
        dim = int(fields.get("n", n if n is not None else 0))
        if n is not None and dim != n:
            raise ValueError(f"builtin declares n={dim} but n={n} was requested")
        payload = {"a": float(fields["a"]),
                   "role": "weight" if kind == "conformal" else "extremizer"}
        if kind == "extremizer":
            payload["gamma"] = float(fields["gamma"])
        return FunctionSpec("conformal-family", dim, payload)
    raise ValueError(f"unknown builtin function {text!r}")


def load_spec(source: str, n: int | None = None) -> FunctionSpec:
    """Builtin string, JSON file, or CSV samples file."""
    path = Path(source)
    if path.suffix == ".json" and path.exists():
        spec = FunctionSpec.from_json(path.read_text())
    elif path.suffix == ".csv" and path.exists():
        if n is None:
            raise ValueError("CSV samples need an explicit dimension")
        spec = read_samples_csv(path, n)
    else:
        spec = parse_builtin(source, n)
    if n is not None and spec.n != n:
        raise ValueError(f"function lives on S^{spec.n}, requested S^{n}")
    return spec


def write_samples_csv(path, grid: SphereGrid, values) -> None:
    values = np.asarray(values, dtype=float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if grid.zonal:
            w.writerow(["theta", "value"])
            for th, v in zip(grid.colat_nodes, values):
                w.writerow([repr(float(th)), repr(float(v))])
        else:
            w.writerow(["theta", "phi", "value"])
            for i, th in enumerate(grid.colat_nodes):
                for j, ph in enumerate(grid.lon_nodes):
                    w.writerow([repr(float(th)), repr(float(ph)), repr(float(values[i, j]))])


def read_samples_csv(path, n: int) -> FunctionSpec:
    """Rebuild a grid-samples spec; the grid is inferred from the row count."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError("empty samples file")
    zonal = "phi" not in rows[0]
    vals = np.array([float(r["value"]) for r in rows])
    if zonal:
        L = len(vals) - 1
        grid = build_grid(n, L, zonal=True)
    else:
        ntheta = len({r["theta"] for r in rows})
        L = ntheta - 1
        grid = build_grid(n, L, zonal=False)
        vals = vals.reshape(grid.shape)
    theta = np.array(sorted({float(r["theta"]) for r in rows}))
    if not np.allclose(theta, grid.colat_nodes, atol=1e-12):
        raise ValueError("CSV colatitudes are not the standard Gauss nodes")
    return FunctionSpec.from_samples(grid, vals)
