import math

import pytest
from hypothesis import given, settings, strategies as st

from pseudocurv.expr_dsl import (BinOp, BindError, Call, EvalError, Neg, Num, ParseError, Var,
                                 check_bindings, evaluate, free_names, parse, pretty)

names = st.sampled_from(["x", "y", "r", "theta"])
nums = st.floats(min_value=0.0, max_value=1e6, allow_nan=False).map(lambda v: Num(float(v)))


def trees():
    leaves = st.one_of(nums, names.map(Var))
    return st.recursive(leaves, lambda kids: st.one_of(
        st.builds(Neg, kids),
        st.builds(lambda op, a, b: BinOp(op, a, b), st.sampled_from("+-*/^"), kids, kids),
        st.builds(lambda f, a: Call(f, (a,)), st.sampled_from(["sin", "exp", "sqrt", "ln"]), kids),
        st.builds(lambda a, b: Call("pow", (a, b)), kids, kids),
    ), max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(trees())
def test_pretty_parse_round_trip(tree):
    assert parse(pretty(tree)) == tree


@settings(max_examples=200, deadline=None)
@given(trees())
def test_pretty_is_a_fixed_point(tree):
    s = pretty(tree)
    assert pretty(parse(s)) == s


@pytest.mark.parametrize("src, value", [
    ("2^3^2", 512.0), ("-2^2", -4.0), ("(-2)^2", 4.0), ("2^-1", 0.5), ("-x^2", -9.0),
    ("8/4/2", 1.0), ("1-2-3", -4.0), ("2*3+4", 10.0), ("2+3*4", 14.0), ("2*-x", -6.0),
    ("--x", 3.0), ("pow(2, 10)", 1024.0), ("1.5e1", 15.0), (".5", 0.5), ("3.", 3.0),
    ("sqrt(x^2 + 16)", 5.0), ("abs(-x)", 3.0), ("ln(exp(2))", 2.0),
])
def test_precedence_and_literals(src, value):
    assert evaluate(parse(src), {"x": 3.0}) == pytest.approx(value, rel=1e-15)


def test_unary_minus_below_power():
    assert parse("-x^2") == Neg(BinOp("^", Var("x"), Num(2.0)))
    assert parse("x^-y^2") == BinOp("^", Var("x"), Neg(BinOp("^", Var("y"), Num(2.0))))


@pytest.mark.parametrize("src, offset", [
    ("1 +", 3), ("(x", 0), ("x $ y", 2), ("sin x", 4), ("2 x", 2), ("foo(1)", 0), ("sin(1, 2)", 0),
    ("", 0), ("1..2", 2),
])
def test_parse_errors_carry_offsets(src, offset):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.offset == offset
    caret = info.value.caret().splitlines()
    assert caret[-1].index("^") == offset


def test_non_ascii_character_is_reported_at_its_byte():
    with pytest.raises(ParseError, match="unexpected character") as info:
        parse("x + θ")
    assert info.value.offset == 4
    assert info.value.caret().splitlines()[-1] == "    ^"


@pytest.mark.parametrize("src, binding", [
    ("ln(x)", {"x": -1.0}), ("sqrt(x)", {"x": -4.0}), ("1/x", {"x": 0.0}), ("x^0.5", {"x": -2.0}),
])
def test_domain_errors_point_at_subexpression(src, binding):
    with pytest.raises(EvalError) as info:
        evaluate(parse(src), binding)
    assert info.value.span is not None


def test_integer_powers_of_negative_bases():
    assert evaluate(parse("x^3"), {"x": -2.0}) == -8.0
    assert evaluate(parse("x^-2"), {"x": -2.0}) == 0.25


def test_free_names_and_binding_check():
    node = parse("a*sin(r) + b^2")
    assert free_names(node) == {"a", "b", "r"}
    check_bindings([node], ["r"], ["a", "b"])
    with pytest.raises(BindError, match="b"):
        check_bindings([node], ["r"], ["a"])


def test_evaluate_matches_math():
    x = 0.83
    node = parse("exp(-x)*cos(2*x) + sinh(x)/cosh(x) - tan(x)")
    assert evaluate(node, {"x": x}) == pytest.approx(
        math.exp(-x) * math.cos(2 * x) + math.tanh(x) - math.tan(x), rel=1e-15)
