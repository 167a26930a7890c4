import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoverify.errors import (
    DomainError,
    ExpressionSyntaxError,
    NonConstantExponent,
    UnknownIdentifier,
)
from geoverify.expr import Jet, eval_jet, field_jets, parse

XYZ = ["x", "y", "z"]


@pytest.mark.parametrize(
    "src, sexpr",
    [
        ("exp(2*z)-1", "sub(exp(mul(2,z)),1)"),
        ("-x^2", "neg(pow(x,2))"),
        ("2^-1", "pow(2,neg(1))"),
        ("x-y-z", "sub(sub(x,y),z)"),
        ("x/y*z", "mul(div(x,y),z)"),
        ("x^2^3", "pow(x,pow(2,3))"),
        ("+x", "x"),
        ("1−x", "sub(1,x)"),
    ],
)
def test_parse_structure(src, sexpr):
    assert parse(src, XYZ).sexpr() == sexpr


def test_precedence_values():
    assert parse("2^3^2", []).evaluate([]) == 512.0
    assert parse("-2^2", []).evaluate([]) == -4.0
    assert parse("2*3+4", []).evaluate([]) == 10.0
    assert parse("pi", []).evaluate([]) == math.pi


@pytest.mark.parametrize(
    "src, exc, offset",
    [
        ("x + w", UnknownIdentifier, 4),
        ("foo(x)", UnknownIdentifier, 0),
        ("x ^ y", NonConstantExponent, 2),
        ("(x + 1", ExpressionSyntaxError, 6),
        ("x $ 1", ExpressionSyntaxError, 2),
        ("x 1", ExpressionSyntaxError, 2),
        ("", ExpressionSyntaxError, 0),
        ("é + q", ExpressionSyntaxError, 0),
    ],
)
def test_parse_errors(src, exc, offset):
    with pytest.raises(exc) as info:
        parse(src, XYZ)
    assert info.value.offset == offset


def test_error_offsets_are_bytes():
    # "é" is two bytes in UTF-8
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("x+é", ["x"])
    assert info.value.offset == 2
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("−x+$", ["x"])
    assert info.value.offset == 5


def test_polynomial_jet_exact():
    j = eval_jet(parse("x*x", ["x"]), [3.0], 3)
    assert (j.value, j.d1[0], j.d2[0, 0], j.d3[0, 0, 0]) == (9.0, 6.0, 2.0, 0.0)
    j = eval_jet(parse("x^3*y", ["x", "y"]), [2.0, 5.0], 3)
    assert j.value == 40.0
    np.testing.assert_array_equal(j.d1, [60.0, 8.0])
    np.testing.assert_array_equal(j.d2, [[60.0, 12.0], [12.0, 0.0]])
    assert j.d3[0, 0, 0] == 30.0 and j.d3[0, 0, 1] == 12.0 and j.d3[1, 1, 1] == 0.0


def test_jet_matches_closed_form():
    # d/dz exp(2z) = 2 exp(2z), etc.
    z = 0.37
    j = eval_jet(parse("exp(2*z)", ["z"]), [z], 3)
    e = math.exp(2 * z)
    np.testing.assert_allclose([j.value, j.d1[0], j.d2[0, 0], j.d3[0, 0, 0]], [e, 2 * e, 4 * e, 8 * e], rtol=1e-15)
    j = eval_jet(parse("sin(x)*cos(y)", ["x", "y"]), [0.4, -1.1], 2)
    np.testing.assert_allclose(j.d2[0, 1], -math.cos(0.4) * math.sin(-1.1), rtol=1e-14)


def test_jet_symmetry_exact():
    e = parse("exp(x*y)*sin(z)/(2+cos(x*z))", XYZ)
    j = eval_jet(e, [0.3, -0.7, 0.9], 3)
    np.testing.assert_array_equal(j.d2, j.d2.T)
    for perm in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]:
        np.testing.assert_array_equal(j.d3, np.transpose(j.d3, perm))


def test_order_zero_equals_evaluate():
    e = parse("x/(1+y^2)", XYZ)
    p = [0.1, 0.2, 0.3]
    assert eval_jet(e, p, 0).value == e.evaluate(p)


@pytest.mark.parametrize("src, point", [("ln(x)", [0.0]), ("sqrt(x)", [-1.0]), ("x^0.5", [-2.0]), ("1/x", [0.0])])
def test_domain_errors(src, point):
    e = parse(src, ["x"])
    with pytest.raises(DomainError):
        eval_jet(e, point, 2)
    with pytest.raises(DomainError):
        e.evaluate(point)


def test_field_jets_shapes():
    exprs = [parse(s, XYZ) for s in ("x", "y*z", "exp(x)")]
    v, d1, d2, d3 = field_jets(exprs, [0.0, 1.0, 2.0], 2)
    assert v.shape == (3,) and d1.shape == (3, 3) and d2.shape == (3, 3, 3)
    assert d3 is None
    assert d1[1, 2] == 1.0 and d1[1, 1] == 2.0


def test_jet_arithmetic_against_expressions():
    p = [0.2, -0.4]
    x = Jet.variable(p[0], 0, 2, 2)
    y = Jet.variable(p[1], 1, 2, 2)
    manual = (x * y + 3.0) / (y - 2.0)
    parsed = eval_jet(parse("(x*y+3)/(y-2)", ["x", "y"]), p, 2)
    np.testing.assert_allclose(manual.d2, parsed.d2, rtol=1e-14)


# -- round trip -----------------------------------------------------------------

_atoms = st.sampled_from(["x", "y", "z", "1", "2.5", "pi", "0.125"])


def _build(children):
    return st.one_of(
        st.tuples(st.sampled_from("+-*/"), children, children).map(lambda t: f"({t[1]}){t[0]}({t[2]})"),
        st.tuples(st.sampled_from(["exp", "sin", "cos", "tanh"]), children).map(lambda t: f"{t[0]}({t[1]})"),
        children.map(lambda c: f"-({c})"),
        st.tuples(children, st.sampled_from(["2", "3", "-1", "0.5"])).map(lambda t: f"({t[0]})^{t[1]}"),
    )


expressions = st.recursive(_atoms, _build, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(expressions)
def test_print_parse_round_trip(src):
    e = parse(src, XYZ)
    again = parse(e.to_text(), XYZ)
    assert again == e
    assert again.sexpr() == e.sexpr()


@settings(max_examples=200, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_product_rule_property(a, b):
    f = eval_jet(parse("sin(x)*exp(y)", ["x", "y"]), [a, b], 2)
    np.testing.assert_allclose(f.d1, [math.cos(a) * math.exp(b), math.sin(a) * math.exp(b)], rtol=1e-12, atol=1e-15)
