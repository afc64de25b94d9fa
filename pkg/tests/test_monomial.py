import pytest
from hypothesis import given, strategies as st

from fraczee.monomial import (
    DomainError,
    ExprSyntaxError,
    PolyExpr,
    parse_expr,
    rl_derive,
    term,
)
from fraczee.specfun import gamma

from oracles import classical_derivative


def poly(*terms_):
    return PolyExpr.from_terms(terms_)


def max_diff(a: PolyExpr, b: PolyExpr) -> float:
    return (a - b).max_abs_coeff()


# ---------------------------------------------------------------- parsing


def test_parse_two_terms():
    e = parse_expr("x^2 - 2*y")
    assert len(e.terms) == 2
    assert e == poly(term(1.0, x=2), term(-2.0, y=1))


def test_parse_fractional_exponents():
    e = parse_expr("0.5*x^0.5*z^1.2")
    assert len(e.terms) == 1
    t = e.terms[0]
    assert t.coeff == 0.5
    assert t.exponents == {"x": 0.5, "z": 1.2}


def test_parse_merges_duplicate_terms():
    e = parse_expr("x + x")
    assert len(e.terms) == 1
    assert e.terms[0].coeff == 2.0


def test_parse_negative_exponent_and_signs():
    e = parse_expr("-z^-0.5 + 2*t")
    assert e == poly(term(-1.0, z=-0.5), term(2.0, t=1))


def test_parse_syntax_error_carries_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("x^2 + * y")
    assert err.value.offset == 6


def test_parse_rejects_nonfinite_literal():
    with pytest.raises(ExprSyntaxError):
        parse_expr("1e999*x")


def test_parse_rejects_unknown_symbol():
    with pytest.raises(ExprSyntaxError):
        parse_expr("x + w")


# ---------------------------------------------------------------- rl_derive


def test_integer_order_reduces_to_classical():
    e = parse_expr("x")
    assert rl_derive(e, "x", 1.0) == PolyExpr.const(1.0)


def test_half_derivative_of_x():
    # coefficient Gamma(2)/Gamma(1.5) = 2/sqrt(pi), frozen from the oracle
    d = rl_derive(parse_expr("x"), "x", 0.5)
    assert len(d.terms) == 1
    assert d.terms[0].exponents == {"x": 0.5}
    assert d.terms[0].coeff == pytest.approx(1.1283791670955126, rel=1e-12)


def test_half_derivative_of_sqrt_x_is_constant():
    d = rl_derive(parse_expr("x^0.5"), "x", 0.5)
    assert d.terms[0].exponents == {}
    assert d.terms[0].coeff == pytest.approx(0.8862269254527580, rel=1e-12)


def test_derivative_of_constant_vanishes_at_integer_order():
    assert rl_derive(PolyExpr.const(3.0), "x", 1.0).is_zero()


def test_fractional_derivative_of_constant_does_not_vanish():
    d = rl_derive(PolyExpr.const(1.0), "x", 0.5)
    assert d.terms[0].exponents == {"x": -0.5}
    assert d.terms[0].coeff == pytest.approx(1.0 / gamma(0.5), rel=1e-12)


def test_boundary_pole_drops_term_exactly():
    # D^a z^(a-1) = Gamma(a)/Gamma(0) = 0
    a = 0.112
    assert rl_derive(poly(term(1.0, z=a - 1)), "z", a).is_zero()


def test_domain_violation_reported_with_term():
    with pytest.raises(DomainError) as err:
        rl_derive(parse_expr("x^0.2"), "x", 1.5)
    assert "x^0.2" in str(err.value)


def test_input_exponent_below_minus_one_rejected():
    with pytest.raises(DomainError):
        rl_derive(poly(term(1.0, x=-1.2)), "x", 0.5)


def test_negative_order_is_integration():
    d = rl_derive(parse_expr("x"), "x", -1.0)
    assert d.terms[0].exponents == {"x": 2.0}
    assert d.terms[0].coeff == pytest.approx(0.5, rel=1e-13)


# ---------------------------------------------------------------- evaluate


def test_eval_square():
    assert parse_expr("x^2").evaluate({"x": 3.0}) == 9.0


def test_eval_sign_convention():
    assert parse_expr("x^0.5").evaluate({"x": -4.0}) == pytest.approx(-2.0)
    # the odd extension applies to integer exponents as well
    assert parse_expr("x^2").evaluate({"x": -3.0}) == pytest.approx(-9.0)


def test_eval_mixed():
    assert parse_expr("2*x*y").evaluate({"x": 1.0, "y": 0.5}) == pytest.approx(1.0)


def test_eval_missing_axis():
    with pytest.raises(ValueError):
        parse_expr("x*y").evaluate({"x": 1.0})


def test_eval_zero_to_negative_exponent():
    with pytest.raises(DomainError):
        parse_expr("x^-0.5").evaluate({"x": 0.0})


# ---------------------------------------------------------------- rendering


def test_render_canonical():
    assert rl_derive(parse_expr("x^2"), "x", 1.0).render() == "2*x"
    assert parse_expr("x^2 - 2*y").render() == "x^2 - 2*y"
    assert PolyExpr.zero().render() == "0"


@st.composite
def simple_polys(draw):
    n = draw(st.integers(1, 4))
    terms_ = []
    for _ in range(n):
        coeff = draw(
            st.floats(-5, 5, allow_nan=False, allow_infinity=False).filter(
                lambda c: abs(c) > 1e-3
            )
        )
        exps = {
            a: draw(st.sampled_from([0.0, 0.5, 1.0, 1.5, 2.0, 3.0]))
            for a in ("x", "y", "z")
        }
        terms_.append(term(coeff, **exps))
    return PolyExpr.from_terms(terms_)


@given(simple_polys())
def test_render_parse_round_trip(e):
    # rendering prints 11 significant digits, so the round trip is exact
    # on structure and near-exact on coefficients
    back = parse_expr(e.render())
    assert (back - e).max_abs_coeff() < 1e-8 * max(1.0, e.max_abs_coeff())


# ---------------------------------------------------------------- properties


@given(
    simple_polys(),
    simple_polys(),
    st.sampled_from([0.25, 0.5, 0.75, 1.0]),
    st.sampled_from([1.0, -2.0, 0.5, 3.0]),
    st.sampled_from([1.0, -1.0, 2.5]),
)
def test_linearity(f, g, alpha, a, b):
    lhs = rl_derive(a * f + b * g, "x", alpha)
    rhs = a * rl_derive(f, "x", alpha) + b * rl_derive(g, "x", alpha)
    assert max_diff(lhs, rhs) < 1e-12


def test_order_one_matches_classical_on_200_random_polys():
    import numpy as np

    rng = np.random.default_rng(17)
    for _ in range(200):
        terms_ = [
            term(
                float(rng.uniform(-5, 5)),
                x=float(rng.uniform(0, 4)),
                y=float(rng.integers(0, 4)),
            )
            for _ in range(rng.integers(1, 5))
        ]
        e = PolyExpr.from_terms(terms_)
        assert max_diff(rl_derive(e, "x", 1.0), classical_derivative(e, "x")) < 1e-13


# exponent strategies stay on a millesimal grid: the engine identifies
# exponents at 1e-9 resolution, so values sitting exactly on a rounding
# boundary of that grid are outside its contract


@given(
    st.integers(500, 4000).map(lambda k: k / 1000.0),
    st.sampled_from([0.25, 0.5, 0.75]),
    st.sampled_from([0.25, 0.5, 0.75]),
)
def test_composition_adds_orders(nu, a, b):
    e = poly(term(1.0, x=nu))
    step = rl_derive(rl_derive(e, "x", a), "x", b)
    direct = rl_derive(e, "x", a + b)
    assert max_diff(step, direct) < 1e-12


@given(
    st.integers(0, 4000).map(lambda k: k / 1000.0),
    st.sampled_from([0.25, 0.5, 0.75, 1.0]),
)
def test_product_rule_with_x(nu, alpha):
    # D^a (x f) = x D^a f + a D^(a-1) f  for f = x^nu
    f = poly(term(1.0, x=nu))
    lhs = rl_derive(poly(term(1.0, x=nu + 1.0)), "x", alpha)
    rhs = poly(term(1.0, x=1)) * rl_derive(f, "x", alpha) + alpha * rl_derive(
        f, "x", alpha - 1.0
    )
    assert max_diff(lhs, rhs) < 1e-12


def test_drop_tol_removes_dust():
    e = PolyExpr.from_terms([term(1.0, x=1), term(1e-15, y=1)])
    assert len(e.terms) == 1
    keep = PolyExpr.from_terms([term(1.0, x=1), term(1e-15, y=1)], drop_tol=0.0)
    assert len(keep.terms) == 2
