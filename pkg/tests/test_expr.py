import math

import pytest
from hypothesis import given, settings, strategies as st

from wirtinger.errors import EvalError, ParseError
from wirtinger.expr import BinOp, Call, Neg, Num, Var, parse_components, parse_expression


@pytest.mark.parametrize(
    "text, env, expected",
    [
        ("u^2 - v^2", {"u": 1, "v": 2}, -3.0),
        ("2*u*v", {"u": 1, "v": 2}, 4.0),
        ("-u^2", {"u": 3}, -9.0),
        ("2^-1", {}, 0.5),
        ("2^3^2", {}, 512.0),
        ("8/4/2", {}, 1.0),
        ("1 - 2 - 3", {}, -4.0),
        ("--u", {"u": 2}, 2.0),
        ("sqrt(u) * exp(0)", {"u": 9}, 3.0),
        ("sin(u)^2 + cos(u)^2", {"u": 0.7}, 1.0),
        (".5e1 + 1.", {}, 6.0),
    ],
)
def test_evaluate(text, env, expected):
    assert parse_expression(text).evaluate(env) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "text, offset",
    [
        ("sin(u", 6),
        ("u +", 4),
        ("u $ v", 3),
        ("(u", 3),
        ("u v", 3),
        ("", 1),
        ("tan(u)", 4),
        ("sin u", 5),
    ],
)
def test_parse_error_offset(text, offset):
    with pytest.raises(ParseError) as exc:
        parse_expression(text)
    assert exc.value.offset == offset


@pytest.mark.parametrize(
    "text, env",
    [
        ("1/u", {"u": 0}),
        ("u^-1", {"u": 0}),
        ("(-2)^0.5", {}),
        ("sqrt(u)", {"u": -1}),
        ("exp(u)", {"u": 1e4}),
        ("w", {"u": 1}),
        ("u^u", {"u": 1e3}),
    ],
)
def test_eval_error(text, env):
    with pytest.raises(EvalError):
        parse_expression(text).evaluate(env)


def test_negative_base_integer_exponent():
    assert parse_expression("(-2)^3").evaluate({}) == -8.0


def test_components():
    assert len(parse_components("(u, v, u^2-v^2, 2*u*v)")) == 4
    assert len(parse_components("u, v")) == 2
    assert len(parse_components(["u", "v", "0"])) == 3
    [single] = parse_components("(u+v)*2")
    assert single.evaluate({"u": 1, "v": 2}) == 6.0
    with pytest.raises(ParseError):
        parse_components("(u, v")


def test_variables():
    assert parse_expression("u*sin(v) + 2").variables() == {"u", "v"}


@pytest.mark.parametrize(
    "text", ["u^2 - v^2", "2*u*v", "sin(u*v)", "exp(-u)*cos(v)", "sqrt(1 + u^2)", "u/(1+v^2)", "u^3^0.5", "-(u-v)^2"]
)
def test_diff_matches_finite_difference(text):
    e = parse_expression(text)
    env = {"u": 0.7, "v": -0.4}
    h = 1e-6
    for var in ("u", "v"):
        up, dn = dict(env), dict(env)
        up[var] += h
        dn[var] -= h
        fd = (e.evaluate(up) - e.evaluate(dn)) / (2 * h)
        assert e.diff(var).evaluate(env) == pytest.approx(fd, abs=1e-7)


def test_diff_variable_exponent():
    with pytest.raises(EvalError):
        parse_expression("2^u").diff("u").evaluate({"u": 1})


@pytest.mark.parametrize(
    "text, printed",
    [
        ("(u+v)*w", "(u + v) * w"),
        ("u+(v*w)", "u + v * w"),
        ("u-(v-w)", "u - (v - w)"),
        ("(u-v)-w", "u - v - w"),
        ("(u^v)^w", "(u^v)^w"),
        ("u^(v^w)", "u^v^w"),
        ("(-u)^2", "(-u)^2"),
        ("-(u^2)", "-u^2"),
        ("u/(v/w)", "u / (v / w)"),
        ("2.0*u", "2 * u"),
    ],
)
def test_pretty(text, printed):
    assert parse_expression(text).pretty() == printed


def test_pretty_negative_literal_base():
    assert BinOp("^", Num(-2.0), Var("x")).pretty() == "(-2)^x"


_leaf = st.one_of(
    st.sampled_from(["u", "v", "w"]).map(Var),
    st.floats(0, 100, allow_nan=False).map(Num),
    st.integers(0, 9).map(lambda k: Num(float(k))),
)


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from("+-*/^"), children, children),
        st.builds(Call, st.sampled_from(["sin", "cos", "exp", "sqrt"]), children),
    )


exprs = st.recursive(_leaf, _extend, max_leaves=12)


@settings(max_examples=100, deadline=None)
@given(exprs)
def test_pretty_parse_fixed_point(e):
    text = e.pretty()
    again = parse_expression(text)
    assert again.pretty() == text
    env = {"u": 0.3, "v": 1.7, "w": 0.9}
    try:
        expected = e.evaluate(env)
    except EvalError:
        with pytest.raises(EvalError):
            again.evaluate(env)
        return
    got = again.evaluate(env)
    assert got == expected or math.isclose(got, expected, rel_tol=1e-12)
