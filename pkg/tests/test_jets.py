import numpy as np
import pytest
import sympy as sp

from pseudocurv.expr_dsl import parse
from pseudocurv.jets import SingularMetricError, eval_jet, invert, jet_matrix

X, Y = sp.symbols("x y", real=True)

CASES = [
    "x^2*y + sin(x*y)",
    "exp(-x^2 - y)/(1 + y^2)",
    "sqrt(1 + x^2*y^2)*ln(2 + x)",
    "(1 - 2/x)^(-1) + y^3",
    "x^y",
    "pow(x + 1, 2.5)*cosh(y) - tan(x/3)",
    "abs(x - 3)*sinh(y)",
    "-x^2/(y - 4)^3",
]


@pytest.mark.parametrize("src", CASES)
def test_jet_matches_sympy(src):
    point = np.array([1.3, 0.7])
    jet = eval_jet(parse(src), point, ("x", "y"))
    f = sp.sympify(src.replace("^", "**").replace("ln", "log"), locals={"x": X, "y": Y})
    sub = {X: point[0], Y: point[1]}
    grad = [float(sp.diff(f, v).subs(sub)) for v in (X, Y)]
    hess = [[float(sp.diff(f, a, b).subs(sub)) for b in (X, Y)] for a in (X, Y)]
    scale = max(1.0, abs(float(f.subs(sub))))
    assert jet.value == pytest.approx(float(f.subs(sub)), rel=1e-13)
    np.testing.assert_allclose(jet.grad, grad, rtol=1e-12, atol=1e-12 * scale)
    np.testing.assert_allclose(jet.hess, hess, rtol=1e-12, atol=1e-12 * scale)


def test_params_are_constants():
    jet = eval_jet(parse("m*x^2"), [2.0], ("x",), {"m": 3.0})
    assert jet.value == 12.0
    np.testing.assert_allclose(jet.grad, [12.0])
    np.testing.assert_allclose(jet.hess, [[6.0]])


def test_inverse_jets_match_finite_differences():
    grid = [[parse("1 + x^2"), parse("x*y")], [parse("x*y"), parse("2 + sin(y)")]]
    p = np.array([0.4, 0.9])
    inv = invert(jet_matrix(grid, p, ("x", "y")))
    h = 1e-5

    def value(q):
        return invert(jet_matrix(grid, q, ("x", "y"))).value

    for i in range(2):
        e = np.eye(2)[i] * h
        fd = (value(p + e) - value(p - e)) / (2 * h)
        np.testing.assert_allclose(inv.grad[..., i], fd, atol=1e-8)
    np.testing.assert_allclose(inv.value @ np.array([[1 + 0.16, 0.36], [0.36, 2 + np.sin(0.9)]]), np.eye(2),
                               atol=1e-14)


def test_singular_metric_detected():
    grid = [[parse("x"), parse("x")], [parse("x"), parse("x")]]
    with pytest.raises(SingularMetricError):
        invert(jet_matrix(grid, [1.0], ("x",)))
