import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from holorect.errors import EvaluationAtSingularity, ParseError, RangeError
from holorect.funcspec import (
    BinOp,
    Call,
    Const,
    Neg,
    Pow,
    Var,
    central_difference,
    differentiate,
    evaluate_node,
    parse,
    parse_expr,
    to_source,
)

# expressions exercised by the derivative and round-trip checks
SAMPLES = (
    "z^2 + 1",
    "exp(z)",
    "sin(z)*cos(z)",
    "z*sin(z)",
    "(z^3 - 2*z + 1)/(z - 3)",
    "exp(-z^2/2)",
    "1/(z - 2.5 - 0.5*i)",
    "cos(exp(z)) - z^4/6",
    "(2 + i)*z^5 - i",
)


def _points(n, seed, radius=2.0):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


# --- parser -----------------------------------------------------------------


def test_parse_examples():
    assert abs(parse("z^2 + 1")(1j)) == 0
    assert parse("exp(z)")(0) == 1
    assert parse("1/(z-2)").singularities == (2 + 0j,)
    assert parse("z*z")(1 + 1j) == 2j


def test_precedence():
    z = 1.5 - 0.5j
    cases = {
        "-z^2": -(z**2),
        "2*z^2^1": 2 * z**2,
        "1 - z - 2": 1 - z - 2,
        "8 / z / 2": 8 / z / 2,
        "1 + 2*z": 1 + 2 * z,
        "(1 + 2)*z": 3 * z,
        "-z*-z": z * z,
        "2^3^2": 2.0**9,
    }
    for src, want in cases.items():
        assert abs(parse(src)(z) - want) < 1e-12, src


def test_constants_and_loop_variable():
    assert abs(parse("exp(i*pi)")(0) + 1) < 1e-15
    f = parse("t*2", var="t")
    assert f(3) == 6
    with pytest.raises(ParseError):
        parse("z + t", var="t")


@pytest.mark.parametrize(
    "src", ["z^", "z^-1", "z^1.5", "z^(2)", "1 +", "(z", "foo(z)", "z $ 2", "exp z", "", "2 3"]
)
def test_syntax_errors(src):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.code == "E_SYNTAX"
    assert info.value.position >= 0


def test_pole_detection():
    assert parse("1/(z-3-2*i)").singularities == (3 + 2j,)
    assert parse("(z^2-4)/(z-2)").singularities == (2 + 0j,)
    assert parse("1/z").singularities == (0j,)
    assert parse("1/((z-1)*(z+1))").singularities == (1 + 0j, -1 + 0j)
    assert parse("1/(z-1)^2 + 1/(z-1)").singularities == (1 + 0j,)
    assert parse("exp(z)").singularities == ()
    assert parse("exp(z)", singularities=["1,1"]).singularities == (1 + 1j,)


# --- evaluation ----------------------------------------------------------------


def test_euler_identity():
    assert abs(parse("exp(z)")(1j * math.pi) - (-1)) < 1e-12


def test_builtins_match_cmath():
    for z in _points(50, 1, radius=3):
        assert abs(parse("exp(z)")(z) - cmath.exp(z)) <= 1e-13 * abs(cmath.exp(z))
        assert abs(parse("sin(z)")(z) - cmath.sin(z)) <= 1e-13 * max(1, abs(cmath.sin(z)))
        assert abs(parse("cos(z)")(z) - cmath.cos(z)) <= 1e-13 * max(1, abs(cmath.cos(z)))


def test_evaluation_at_singularity():
    with pytest.raises(EvaluationAtSingularity):
        parse("1/(z)")(0)
    with pytest.raises(EvaluationAtSingularity):
        parse("1/(z-1)")(np.array([0, 1, 2]))


def test_range_error():
    with pytest.raises(RangeError):
        parse("exp(z)")(1000)


def test_vectorised_matches_scalar():
    f = parse("(z^3 - 2*z + 1)/(z - 3)")
    zs = _points(20, 2)
    vec = f(zs)
    assert vec.shape == zs.shape
    assert all(vec[j] == f(complex(z)) for j, z in enumerate(zs))


@pytest.mark.parametrize("pair", [("z^2", "sin(z)"), ("exp(z)", "1/(z-3)"), ("z*cos(z)", "z^4 - i")])
def test_linearity_of_evaluation(pair):
    fs, gs = pair
    alpha, beta = 1.5 - 2j, -0.25 + 0.5j
    h = parse(f"({alpha.real}{alpha.imag:+}*i)*({fs}) + ({beta.real}{beta.imag:+}*i)*({gs})")
    f, g = parse(fs), parse(gs)
    for z in _points(100, 3, radius=1.5):
        want = alpha * f(z) + beta * g(z)
        assert abs(h(z) - want) <= 1e-12 * max(1, abs(want))


# --- printing round trip ------------------------------------------------------

leaf = st.one_of(
    st.just(Var("z")),
    st.builds(
        Const,
        st.builds(complex, st.floats(-5, 5, allow_nan=False), st.floats(-5, 5, allow_nan=False)),
    ),
)


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(Pow, children, st.integers(0, 3)),
        st.builds(Call, st.sampled_from(("exp", "sin", "cos")), children),
    )


trees = st.recursive(leaf, _extend, max_leaves=8)


@given(trees)
@settings(max_examples=300, deadline=None)
def test_print_parse_round_trip(tree):
    text = to_source(tree)
    back = parse_expr(text)
    zs = _points(100, 4, radius=1.0)
    with np.errstate(all="ignore"):
        v1 = evaluate_node(tree, zs)
        v2 = evaluate_node(back, zs)
    ok = np.isfinite(v1) & (np.abs(v1) < 1e12)
    assume(ok.any())
    assert np.all(np.abs(v1[ok] - v2[ok]) <= 1e-12 * np.maximum(1, np.abs(v1[ok]))), text


def test_round_trip_is_textually_stable():
    for src in SAMPLES:
        once = parse(src).source
        assert parse(once).source == once


# --- differentiation -------------------------------------------------------------


def test_derivative_examples():
    d = differentiate(parse("z^3"))
    assert d(2) == 12
    assert parse("exp(z)").derivative().source == "exp(z)"
    f = parse("z*sin(z)")
    assert differentiate(f)(0) == 0
    h = 1e-5
    assert abs(differentiate(f)(0.3 + 0.2j) - central_difference(f, 0.3 + 0.2j, h)) < 1e-8


def test_derivative_keeps_singularities():
    f = parse("1/(z-2)")
    assert f.derivative().singularities == f.singularities


@pytest.mark.parametrize("src", SAMPLES)
def test_derivative_against_finite_difference(src):
    f = parse(src)
    df = f.derivative()
    checked = 0
    for z in _points(200, 5):
        if any(abs(z - s) < 0.1 for s in f.singularities):
            continue
        d = df(z)
        assert abs(d - central_difference(f, z)) <= 1e-6 * (1 + abs(d))
        checked += 1
        if checked == 50:
            break
    assert checked == 50


def test_derivative_folds_constants():
    assert differentiate(parse("5")).source == "0.0"
    assert differentiate(parse("z")).source == "1.0"
    assert differentiate(parse("3*z + 7")).source == "3.0"
