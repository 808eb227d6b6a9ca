import math

import numpy as np
import pytest
import sympy as sp

from pseudocurv import tensors as tc
from pseudocurv.curvature import (ChartError, DomainViolation, christoffel, curvature_pack, full_chart,
                                  gauss_pack, warped_chart, warped_components)
from pseudocurv.jets import SingularMetricError


def sympy_riemann(coords, g, point):
    """R_hijk = g_hs (d_k G^s_ij - d_j G^s_ik + G^p_ij G^s_pk - G^p_ik G^s_pj), evaluated at point."""
    xs = sp.symbols(coords, real=True)
    G = sp.Matrix(g)
    Gi = G.inv()
    n = len(xs)
    Gam = [[[sum(Gi[s, l] * (sp.diff(G[l, i], xs[j]) + sp.diff(G[l, j], xs[i]) - sp.diff(G[i, j], xs[l]))
                 for l in range(n)) / 2 for j in range(n)] for i in range(n)] for s in range(n)]
    sub = dict(zip(xs, point))
    R = np.zeros((n,) * 4)
    for s in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    e = (sp.diff(Gam[s][i][j], xs[k]) - sp.diff(Gam[s][i][k], xs[j])
                         + sum(Gam[p][i][j] * Gam[s][p][k] - Gam[p][i][k] * Gam[s][p][j] for p in range(n)))
                    R[s, i, j, k] = float(e.subs(sub))
    gv = np.array(G.subs(sub), dtype=float)
    return np.einsum("hs,sijk->hijk", gv, R), np.array([[[float(Gam[s][i][j].subs(sub)) for j in range(n)]
                                                          for i in range(n)] for s in range(n)])


def test_generic_pipeline_matches_sympy():
    coords = ("t", "x", "y", "z")
    src = [["-(1 + x^2)", "0.1*y", "0", "0"],
           ["0.1*y", "exp(z)", "0", "x*t"],
           ["0", "0", "1 + y^2", "0"],
           ["0", "x*t", "0", "2 + sin(x)"]]
    t, x, y, z = sp.symbols(coords, real=True)
    g = [[-(1 + x ** 2), sp.Rational(1, 10) * y, 0, 0],
         [sp.Rational(1, 10) * y, sp.exp(z), 0, x * t],
         [0, 0, 1 + y ** 2, 0],
         [0, x * t, 0, 2 + sp.sin(x)]]
    p = (0.3, 0.7, -0.4, 0.2)
    R_ref, Gam_ref = sympy_riemann(coords, g, p)
    chart = full_chart(coords, src)
    pack = curvature_pack(chart, p)
    np.testing.assert_allclose(christoffel(chart, p), Gam_ref, atol=1e-12)
    assert tc.residual(pack.R, R_ref) < 1e-11


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
def test_unit_sphere_scalar_curvature_is_two(theta):
    chart = full_chart(("theta", "phi"), [["1", "0"], ["0", "sin(theta)^2"]])
    assert curvature_pack(chart, {"theta": theta, "phi": 0.0}).kappa == pytest.approx(2.0, rel=1e-12)


def test_hyperbolic_plane_and_three_sphere():
    h2 = full_chart(("x", "y"), [["1/y^2", "0"], ["0", "1/y^2"]])
    assert curvature_pack(h2, [0.2, 1.7]).kappa == pytest.approx(-2.0, rel=1e-12)
    s3 = full_chart(("a", "b", "c"), [["1", "0", "0"], ["0", "sin(a)^2", "0"], ["0", "0", "sin(a)^2*sin(b)^2"]])
    assert curvature_pack(s3, [1.1, 0.8, 0.0]).kappa == pytest.approx(6.0, rel=1e-12)


def test_flat_chart_in_polar_coordinates_is_flat():
    chart = full_chart(("r", "th"), [["1", "0"], ["0", "r^2"]])
    pack = curvature_pack(chart, [2.0, 0.5])
    assert tc.norm(pack.R) < 1e-14


def test_schwarzschild_is_ricci_flat():
    chart = warped_chart(("t", "r"), [["-(1 - 2*m/r)", "0"], ["0", "1/(1 - 2*m/r)"]], "r^2", 2, 2.0, {"m": 1.0})
    pack = curvature_pack(chart, {"t": 0.0, "r": 3.0})
    assert tc.norm(pack.S) < 1e-13 * tc.norm(pack.R)


@pytest.mark.parametrize("fiber_dim, kt", [(2, 2.0), (3, 6.0), (3, 0.0), (4, -12.0)])
def test_block_formulas_agree_with_generic_pipeline(fiber_dim, kt):
    chart = warped_chart(("t", "r"), [["-(1 + 0.3*t*r)", "0.1*t"], ["0.1*t", "1 + 1/r"]],
                         "r^2*(1 + 0.2*t)", fiber_dim, kt)
    p = {"t": 0.4, "r": 2.2}
    gen = curvature_pack(chart, p)
    blk, inv = warped_components(chart, p)
    for name in ("R", "S", "C", "E"):
        assert tc.residual(getattr(gen, name), getattr(blk, name)) < 1e-10, name
    assert gen.kappa == pytest.approx(blk.kappa, rel=1e-10)
    assert inv.kappa_tilde == kt


def test_indefinite_fiber_signature():
    chart = warped_chart(("x", "y"), [["1", "0"], ["0", "1 + x^2"]], "1 + x^2 + y^2", 2, 0.0,
                         fiber_signature=[1, -1])
    gen = curvature_pack(chart, [0.3, 0.6])
    blk, _ = warped_components(chart, [0.3, 0.6])
    assert tc.residual(gen.R, blk.R) < 1e-10


def test_pole_and_singular_points_raise():
    chart = warped_chart(("t", "r"), [["-1", "0"], ["0", "1"]], "r^2", 2, 2.0)
    with pytest.raises(DomainViolation):
        curvature_pack(chart, {"t": 0.0, "r": 1.0, "theta": 0.0, "phi": 0.0})
    degenerate = full_chart(("x", "y"), [["x", "0"], ["0", "1"]])
    with pytest.raises(DomainViolation, match="singular") as info:
        curvature_pack(degenerate, [0.0, 1.0])
    assert isinstance(info.value.__cause__, SingularMetricError)


def test_chart_validation():
    with pytest.raises(ChartError):
        full_chart(("x", "y"), [["1", "x"], ["y", "1"]])
    with pytest.raises(ChartError):
        full_chart(("x", "y"), [["1", "0"]])
    with pytest.raises(ChartError):
        warped_chart(("t", "r", "s"), [["1", "0"], ["0", "1"]], "r", 2, 1.0)
    chart = full_chart(("x", "y"), [["1", "0"], ["0", "1"]])
    with pytest.raises(ChartError):
        curvature_pack(chart, {"x": 0.0, "y": 0.0, "z": 1.0})


def test_gauss_equation_pack(rng):
    n = 5
    f = tc.random_frame(n, rng)
    H = tc.random_sym(n, rng)
    pack = gauss_pack(H, f, eps=-1, ambient_kappa=3.0)
    expected = -0.5 * tc.kn(H, H) + 3.0 / (n * (n + 1)) * tc.gtensor(f)
    assert tc.residual(pack.R, expected) < 1e-13
    assert tc.residual(pack.C, tc.weyl(pack.R, f)) < 1e-12


def test_equator_default_for_fiber_coordinates():
    chart = warped_chart(("t", "r"), [["-1", "0"], ["0", "1"]], "r^2", 2, 2.0)
    a = curvature_pack(chart, {"t": 0.0, "r": 2.0})
    b = curvature_pack(chart, {"t": 0.0, "r": 2.0, "theta": math.pi / 2, "phi": 0.0})
    np.testing.assert_array_equal(a.R, b.R)
