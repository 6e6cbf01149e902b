"""Expression parsing and exact jet arithmetic against the FD oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgcl.errors import EvaluationError, ParseError
from mgcl.expressions import ScalarField2D, expr_to_text, parse_expression

from oracles import fd_jet


FIXTURE_FIELDS = [
    ("x^2 - y^2", lambda x, y: x * x - y * y),
    ("2*x*y", lambda x, y: 2 * x * y),
    ("log(cos(x)/cos(y))", lambda x, y: math.log(math.cos(x) / math.cos(y))),
    ("sin(x)*exp(y) - atan(x*y)", lambda x, y: math.sin(x) * math.exp(y) - math.atan(x * y)),
    ("(1 + x^2 + y^2)^-2", lambda x, y: (1 + x * x + y * y) ** -2),
    ("x/(2 + y) + y^3", lambda x, y: x / (2 + y) + y**3),
]


@pytest.mark.parametrize("text,pyfunc", FIXTURE_FIELDS)
def test_jets_match_fd_oracle(text, pyfunc):
    field = ScalarField2D.parse(text)
    rng = np.random.default_rng(7)
    for _ in range(25):
        x, y = rng.uniform(-0.8, 0.8, 2)
        jet = field.jet(x, y)
        oracle = fd_jet(pyfunc, x, y)
        scale = 1.0 + np.abs(oracle)
        assert np.all(np.abs(jet - oracle) / scale < 1e-5)


@given(
    x=st.floats(min_value=-0.85, max_value=0.85),
    y=st.floats(min_value=-0.85, max_value=0.85),
)
@settings(max_examples=40, deadline=None)
def test_jet_property_scherk_height(x, y):
    field = ScalarField2D.parse("log(cos(x)/cos(y))")
    jet = field.jet(x, y)
    # Closed-form partials of log cos x - log cos y.
    assert jet[1] == pytest.approx(-math.tan(x), abs=1e-12)
    assert jet[2] == pytest.approx(math.tan(y), abs=1e-12)
    assert jet[3] == pytest.approx(-1.0 / math.cos(x) ** 2, rel=1e-12)
    assert jet[4] == pytest.approx(0.0, abs=1e-14)
    assert jet[5] == pytest.approx(1.0 / math.cos(y) ** 2, rel=1e-12)


def test_evaluation_is_deterministic():
    field = ScalarField2D.parse("sin(x*y) - exp(x)/(3 + y)")
    a = field.jet(0.123456, -0.654321)
    b = field.jet(0.123456, -0.654321)
    assert np.array_equal(a, b)


def test_jet_batch_matches_scalar_path():
    field = ScalarField2D.parse("x^3 - 3*x*y^2")
    xs = np.linspace(-0.9, 0.9, 31)
    ys = np.linspace(0.9, -0.9, 31)
    batch = field.jet_batch(xs, ys)
    for i in range(31):
        assert np.array_equal(batch[i], field.jet(xs[i], ys[i]))


def test_parse_errors():
    for bad in ["", "x +", "sin x", "x ^ y", "x^2.5", "bogus(x)", "x & y", "(x"]:
        with pytest.raises(ParseError):
            parse_expression(bad)


def test_integer_powers_including_negative():
    field = ScalarField2D.parse("x^-2")
    assert field(2.0, 0.0) == pytest.approx(0.25)
    assert ScalarField2D.parse("x^0")(3.0, 1.0) == 1.0
    assert ScalarField2D.parse("x^1")(3.0, 1.0) == 3.0


def test_nonfinite_evaluation_raises():
    field = ScalarField2D.parse("log(x)")
    with pytest.raises(EvaluationError):
        field.jet(-0.5, 0.0)
    with pytest.raises(EvaluationError):
        ScalarField2D.parse("1/x").jet(0.0, 0.0)


def test_expr_text_roundtrip():
    for text, pyfunc in FIXTURE_FIELDS:
        field = ScalarField2D.parse(text)
        rebuilt = ScalarField2D.parse(expr_to_text(field.expression))
        assert np.array_equal(rebuilt.jet(0.37, -0.21), field.jet(0.37, -0.21))


def test_unary_minus_and_precedence():
    assert ScalarField2D.parse("-x^2")(2.0, 0.0) == -4.0  # -(x^2)
    assert ScalarField2D.parse("2 + 3 * x")(1.0, 0.0) == 5.0
    assert ScalarField2D.parse("(2 + 3) * x")(1.0, 0.0) == 5.0
