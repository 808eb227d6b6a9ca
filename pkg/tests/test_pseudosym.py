import numpy as np
import pytest

from pseudocurv import catalog as cat
from pseudocurv import pseudosym as ps
from pseudocurv import tensors as tc
from pseudocurv.curvature import curvature_pack, pack_from_riemann, warped_components


@pytest.mark.parametrize("n", [4, 5, 6])
def test_rank_two_construction(n, rng):
    for _ in range(10):
        s5 = cat.fixture_rank_two(n, rng)
        assert max(s5.checks.values()) < 1e-10
        bb, ww, br = ps.rank_two_conditions(s5)
        assert bb.verdict and ww.verdict and br.verdict
        fitted = {**bb.coefficients, **ww.coefficients, **br.coefficients}
        for k in ("alpha1", "alpha2", "alpha3", "alpha4", "alpha5"):
            assert fitted[k] == pytest.approx(s5.alpha[k], rel=1e-7, abs=1e-9), k


def test_rank_two_printed_alpha3_is_not_the_fitted_value(rng):
    s5 = cat.fixture_rank_two(4, rng)
    _, _, br = ps.rank_two_conditions(s5)
    assert abs(br.coefficients["alpha3"] - s5.alpha["alpha3_published"]) > 1e-3


WARPED_POINTS = [("mm_family", {"t": 0.0, "r": 3.0}), ("bpsi_family", {"t": 0.0, "r": 4.0}),
                 ("morris_thorne", {"t": 0.0, "r": 2.5}), ("ssss_time_dependent", {"t": 0.7, "r": 4.0})]


@pytest.mark.parametrize("fid, point", WARPED_POINTS)
def test_warped_coefficients_match_fits(fid, point):
    fam = cat.build(fid)
    pack, inv = warped_components(fam.chart, point)
    res = ps.warped_conditions(pack, inv)
    assert all(r.verdict for r in res)
    pred = ps.warped_coefficients(pack.n, pack.kappa, inv.tau1, inv.rho, inv.phi)
    for r in res:
        assert r.status == "ok"
        for k, v in r.coefficients.items():
            assert v == pytest.approx(pred[k], rel=1e-6, abs=1e-9), (r.id, k)


def test_reissner_nordstrom_closed_triple_satisfies_ricci_condition():
    fam = cat.build("reissner_nordstrom", {"m": 1.0, "q": 1.0})
    pack, inv = warped_components(fam.chart, {"t": 0.0, "r": 2.0})
    c = ps.warped_coefficients(4, pack.kappa, inv.tau1, inv.rho, inv.phi)
    assert c["alpha3"] == pytest.approx(-0.015625)
    assert c["alpha4"] == pytest.approx(-0.25)
    assert c["alpha5"] == pytest.approx(12.0)
    P = ps._Products(pack)
    rhs = c["alpha3"] * P["Q", "g", "S"] + c["alpha4"] * P["Q", "g", "S2"] + c["alpha5"] * P["Q", "S", "S2"]
    assert tc.residual(P["dot", "R", "S"], rhs) < 1e-12
    fit = ps.fit_ricci_three_term(pack, P=P)
    assert fit.verdict and fit.status.startswith("rank-deficient")


@pytest.mark.parametrize("n", [4, 5, 6])
def test_roter_suite_on_fixtures(n, rng):
    for _ in range(5):
        R, f, phi1, mu1, eta1 = cat.fixture_roter(n, rng)
        for r in ps.roter_suite(pack_from_riemann(f, R), phi1, mu1, eta1):
            assert r.residual < 1e-8, r.id


@pytest.mark.parametrize("n", [4, 5, 6])
def test_roter_form_algebra(n, rng):
    B, A, f, phi1, mu1, eta1 = cat.fixture_prop27(n, rng)
    for k, v in ps.roter_algebra_checks(B, A, f, phi1, mu1, eta1).items():
        assert v < 1e-10, k


def test_roter_constants_at_reissner_nordstrom_point():
    fam = cat.build("reissner_nordstrom", {"m": 1.0, "q": 1.0})
    pack = curvature_pack(fam.chart, {"t": 0.0, "r": 2.0})
    c = ps.roter_constants(4, pack.kappa, 24.0, 0.5, 0.03125)
    assert c["L_C"] == pytest.approx(-0.0625)
    assert c["alpha1"] == pytest.approx(0.0, abs=1e-12)


def test_fit_statuses():
    z = np.zeros((2, 2, 2, 2))
    one = np.ones((2, 2, 2, 2))
    assert ps.fit_L(z, z, "x").status == "trivially satisfied"
    r = ps.fit_L(one, z, "x")
    assert not r.verdict and r.status.startswith("degenerate")
    r = ps.fit_L(3 * one, one, "x").compare({"L": 3.0})
    assert r.verdict and r.coefficients_match


def test_lattice_of_reissner_nordstrom():
    fam = cat.build("reissner_nordstrom", {"m": 1.0, "q": 1.0})
    boxes = {b["box"]: b for b in ps.lattice(curvature_pack(fam.chart, {"t": 0.0, "r": 2.0}))}
    assert boxes["R.R = L Q(g,R)"]["holds"] and boxes["C.C = L Q(g,C)"]["holds"]
    assert not boxes["R.R = 0"]["holds"] and not boxes["C = 0"]["holds"]
    assert boxes["nabla R = 0"]["holds"] is None


def test_hypersurface_two_term_coefficient(rng):
    n, kt = 5, 2.5
    _, pack = cat.fixture_hypersurface(n, rng, None, 0.0, 1, kt)
    r = ps.fit_two_term(pack)
    assert r.verdict
    assert r.coefficients["L"] == pytest.approx(-(n - 2) * kt / (n * (n + 1)), rel=1e-9)
