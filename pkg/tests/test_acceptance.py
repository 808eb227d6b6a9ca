"""Acceptance criteria, each run at its stated tolerance.

Criteria 2, 4, 6 and 9 compare against printed closed forms that do not hold.
Their full-pass assertions are strict xfails (a fix upstream turns them into
failures here), and a companion test pins the failing items to exactly the
known misprints so every other item in those batteries must pass.
"""

import time

import pytest

from pseudocurv import suite

RED = {
    2: "printed rank-two alpha3 disagrees with the fitted coefficient",
    4: "Reissner-Nordstrom R.S basis has rank one; the printed alpha4/alpha5 are not identifiable",
    6: "printed alpha2 for JNW uses the opposite curvature sign from the other printed values",
    9: "printed Morris-Thorne and mm E/C quotients are misprinted",
}

KNOWN_MISPRINTS = {
    "section5": {"alpha3 fit vs printed closed form"},
    "rn_point": {"alpha4 fit", "alpha5 fit"},
    "jnw": {"alpha2 fit vs closed form"},
    "nd_oracles": {"morris_thorne: printed oracle", "mm_family: printed oracle"},
    "theorem61": {"alpha3 vs printed closed form", "closed-form triple satisfies R.S (printed alpha3)"},
}


@pytest.fixture(scope="module")
def results():
    t0 = time.perf_counter()
    res = suite.run_suite()
    return res, time.perf_counter() - t0


def _criterion(N):
    marks = [pytest.mark.xfail(strict=True, reason=RED[N])] if N in RED else []
    return pytest.param(N, marks=marks, id=f"criterion{N}")


@pytest.mark.parametrize("N", [_criterion(N) for N in range(1, 11)])
def test_criterion(N, results, capsys):
    res, _ = results
    mine = [r for r in res if r.criterion == N]
    assert mine
    ok = all(r.passed for r in mine)
    worst = max(r.max_residual for r in mine)
    with capsys.disabled():
        print(f"\ncriterion {N}: {'PASS' if ok else 'FAIL'}  max residual {worst:.3e}")
        for r in mine:
            for it in r.failures():
                print(f"    {r.name}: {it.label}  residual {it.residual:.3e} (tol {it.tol:.1e})")
    assert ok, [(r.name, [i.label for i in r.failures()]) for r in mine if not r.passed]


@pytest.mark.parametrize("name", sorted(c.name for c in suite.CHECKS))
def test_only_known_misprints_fail(name, results):
    res, _ = results
    (r,) = [r for r in res if r.name == name]
    assert r.error is None, r.error
    assert {i.label for i in r.failures()} == KNOWN_MISPRINTS.get(name, set())


def test_informational_repairs_pass(results):
    res, _ = results
    info = [(r.name, i) for r in res for i in r.items if i.informational]
    assert info
    assert all(i.passed for _, i in info), [(n, i.label) for n, i in info if not i.passed]


def test_suite_runs_within_budget(results):
    _, elapsed = results
    assert elapsed < 60.0
