import numpy as np
import pytest

from pseudocurv import catalog as cat
from pseudocurv import classify as cl
from pseudocurv import tensors as tc
from pseudocurv.curvature import curvature_pack, pack_from_riemann


def test_numerical_rank():
    assert cl.numerical_rank(np.diag([1.0, 2.0, 0.0, 1e-12])) == 2
    assert cl.numerical_rank(np.zeros((3, 3))) == 0


@pytest.mark.parametrize("negatives", [0, 1])
def test_quasi_rank_scan_finds_alpha(negatives, rng):
    f = tc.random_frame(5, rng, negatives)
    u = rng.uniform(-1, 1, 5)
    S = 0.7 * f.g + np.outer(u, u)
    scan = cl.quasi_rank_scan(S, f)
    assert scan.min_rank == 1
    assert scan.alpha == pytest.approx(0.7, abs=1e-9)


def test_linear_fit_recovers_coefficients_and_flags_dependence(rng):
    a, b = rng.normal(size=(2, 4, 4))
    target = 2.0 * a - 0.5 * b
    fit = cl.linear_fit(target, {"a": a, "b": b})
    assert fit.coefficients["a"] == pytest.approx(2.0)
    assert fit.coefficients["b"] == pytest.approx(-0.5)
    assert fit.rank == 2 and not fit.ill_posed
    dep = cl.linear_fit(3.0 * a, {"a": a, "a2": 2 * a})
    assert dep.rank == 1 and dep.ill_posed and dep.residual < 1e-14
    # minimum norm in unit-scaled columns splits evenly: 1.5 a + 0.75 (2a)
    assert dep.coefficients["a"] == pytest.approx(1.5)
    assert dep.coefficients["a2"] == pytest.approx(0.75)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_roter_fit_recovers_fixture_constants(n, rng):
    R, f, phi1, mu1, eta1 = cat.fixture_roter(n, rng)
    fit = cl.roter_fit(pack_from_riemann(f, R))
    assert fit.verdict
    assert fit.coefficients["phi1"] == pytest.approx(phi1, rel=1e-8)
    assert fit.coefficients["mu1"] == pytest.approx(mu1, rel=1e-8, abs=1e-10)
    assert fit.coefficients["eta1"] == pytest.approx(eta1, rel=1e-8, abs=1e-10)
    assert fit.extra["consequence_residual"] < 1e-9


def test_proportionality():
    T = np.arange(16.0).reshape(4, 4)
    r = cl.proportionality(-3 * T, T)
    assert r.coefficients["lambda"] == pytest.approx(-3.0) and r.verdict
    assert cl.proportionality(T, 0 * T).status == "degenerate"


def _flags(fid, point, params=None):
    fam = cat.build(fid, params)
    return cl.classify_pack(curvature_pack(fam.chart, point))


def test_classification_of_catalog_points():
    flat = _flags("minkowski", {"t": 0.0, "x": 1.0, "y": 0.0, "z": 0.0})
    assert flat.is_flat and flat.is_einstein
    schw = _flags("schwarzschild", {"t": 0.0, "r": 3.0})
    assert schw.is_einstein and not schw.is_flat and not schw.roter.verdict
    rn = _flags("reissner_nordstrom", {"t": 0.0, "r": 2.0})
    assert rn.is_2_quasi_einstein and not rn.is_quasi_einstein and rn.roter.verdict
    assert rn.e_c.coefficients["lambda"] == pytest.approx(1 / 12, rel=1e-9)
    jnw = _flags("jnw", {"t": 0.0, "r": 2.0})
    assert jnw.is_ricci_simple and jnw.is_quasi_einstein and jnw.rank_S == 1
    assert jnw.partially_einstein.coefficients["lambda"] == pytest.approx(0.0662912607, rel=1e-8)
    sph = _flags("unit_sphere_product", {"x": 0.1, "y": 0.2})
    assert sph.is_conformally_flat and not sph.is_einstein


def test_rank_factor_is_respected():
    S = np.diag([1.0, 1e-7, 1.0, 1.0])
    f = tc.frame_from_metric(np.eye(4))
    assert cl.quasi_rank_scan(S, f, factor=1e-8).min_rank >= 1
    assert cl.numerical_rank(S, factor=1e-6) == 3
