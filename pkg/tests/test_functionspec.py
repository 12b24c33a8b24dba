import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracsobolev.functionspec import (
    FunctionSpec, load_spec, parse_builtin, read_samples_csv, write_samples_csv,
)
from fracsobolev.spectral import build_grid, random_coefficients


def test_parse_zonal_terms():
    spec = parse_builtin("zonal:0.3cos^2-1.5cos+2", n=2)
    assert spec.tag == "zonal-formula"
    assert sorted(map(tuple, spec.payload["terms"])) == [(-1.5, 1), (0.3, 2), (2.0, 0)]
    grid = build_grid(2, 8, zonal=True)
    x = np.cos(grid.colat_nodes)
    assert np.allclose(spec.evaluate(grid), 0.3 * x**2 - 1.5 * x + 2, atol=1e-14)


def test_parse_exponent_notation():
    spec = parse_builtin("zonal:1e-3cos", n=4)
    assert spec.payload["terms"][0][0] == pytest.approx(1e-3)


@pytest.mark.parametrize("text", ["zonal:sin", "zonal:cos^x", "banana:1", "zonal:"])
def test_parse_rejects(text):
    with pytest.raises((ValueError, KeyError)):
        parse_builtin(text, n=2)


def test_builtin_dimension_conflict():
    with pytest.raises(ValueError):
        parse_builtin("conformal:n=2:a=0.3", n=4)


def test_conformal_parameter_outside_ball():
    with pytest.raises(ValueError):
        parse_builtin("conformal:n=2:a=1.0")


def test_json_roundtrip(rng):
    for spec in [parse_builtin("zonal:cos^3", n=3),
                 parse_builtin("extremizer:n=4:gamma=1.5:a=0.2"),
                 FunctionSpec.from_coefficients(random_coefficients(2, 3, rng))]:
        back = FunctionSpec.from_json(spec.to_json())
        assert back.tag == spec.tag and back.n == spec.n
        g = build_grid(spec.n, 40, zonal=spec.zonal)
        assert np.allclose(back.evaluate(g), spec.evaluate(g), rtol=1e-15, atol=1e-15)


@pytest.mark.parametrize("zonal", [True, False])
def test_csv_roundtrip(tmp_path, rng, zonal):
    grid = build_grid(2, 6, zonal=zonal)
    c = random_coefficients(2, 6, rng, kind="zonal" if zonal else "full")
    spec = FunctionSpec.from_coefficients(c)
    path = tmp_path / "f.csv"
    write_samples_csv(path, grid, spec.evaluate(grid))
    back = read_samples_csv(path, 2)
    assert np.max(np.abs(back.coefficients(6).values - spec.coefficients(6).values)) < 1e-12
    loaded = load_spec(str(path), n=2)
    assert loaded.tag == "grid-samples"


def test_load_spec_json_file(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(parse_builtin("conformal:n=2:a=0.4").to_json())
    assert load_spec(str(path), n=2).payload["a"] == 0.4
    with pytest.raises(ValueError):
        load_spec(str(path), n=4)


def test_sample_shape_checked():
    with pytest.raises(ValueError):
        FunctionSpec("grid-samples", 2, {"L": 4, "zonal": True, "values": [0.0] * 3})


def _fd_derivatives(spec, n, th, h=1e-5):
    grid_of = lambda t: spec.zonal_profile(np.asarray(t))[0]
    f = grid_of(th)
    d1 = (grid_of(th + h) - grid_of(th - h)) / (2 * h)
    d2 = (grid_of(th + h) - 2 * f + grid_of(th - h)) / h**2
    lap = -(d2 + (n - 1) / np.tan(th) * d1)
    return f, d1**2, lap


@pytest.mark.parametrize("text, n", [("zonal:0.5cos^3-cos", 3), ("conformal:n=2:a=0.6", 2),
                                     ("extremizer:n=4:gamma=1.3:a=0.4", 4)])
def test_derivatives_against_finite_differences(text, n):
    spec = parse_builtin(text, n=n)
    grid = build_grid(n, 24, zonal=True)
    f, g2, lap = spec.derivatives(grid)
    th = grid.colat_nodes
    ff, fg2, flap = _fd_derivatives(spec, n, th)
    assert np.allclose(f, ff, atol=1e-14)
    assert np.allclose(g2, fg2, rtol=1e-6, atol=1e-8)
    assert np.allclose(lap, flap, rtol=1e-4, atol=1e-4)


@given(st.floats(-0.9, 0.9))
def test_conformal_weight_profile(t):
    spec = parse_builtin(f"conformal:n=2:a={t!r}")
    th = np.linspace(0, math.pi, 9)
    x = np.cos(th)
    assert np.allclose(spec.zonal_profile(th)[0], np.log((1 - t * t) / (1 - 2 * t * x + t * t)),
                       atol=1e-13)


@pytest.mark.parametrize("n", [2, 4])
def test_spectral_derivatives_match_closed_form(n):
    spec = parse_builtin("zonal:0.7cos^4-0.2cos+1", n=n)
    grid = build_grid(n, 12, zonal=True)
    coeff = FunctionSpec.from_coefficients(spec.coefficients(4))
    for a, b in zip(spec.derivatives(grid), coeff.derivatives(grid)):
        assert np.allclose(a, b, atol=1e-12)
